//! Dynamical surface tension, the extended Laplace jump with mass transfer,
//! and the Marangoni tangential balance.
//!
//! With a mass flux `Q` crossing the layer, the bulk pressure jump becomes
//! `P_l - P_v = Q^2 (1/rho_v - 1/rho_l) + 2 K / R_m` where
//! `K = H - Q (eta_l/rho_l - eta_v/rho_v)` corrects the static tension by the
//! volume viscosities of the bulks. The planar sentinel `R_m = infinity`
//! drops the capillary term and leaves the bare normal-stress equality.

use crate::coexistence::maxwell_construction;
use crate::eos::FluidParams;
use crate::error::{Error, Result};
use crate::interface::{surface_tension, InterfaceProfile};
use crate::math;

/// Inputs for the extended Laplace jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpInputs {
    /// Mass flux through the interface (g/(cm^2 s)).
    pub q: f64,
    /// Mean curvature radius of the equal-density surfaces, oriented along
    /// increasing density; positive when the surfaces curve away from the
    /// vapour. `f64::INFINITY` is the planar sentinel.
    pub r_m: f64,
    pub rho_v: f64,
    pub rho_l: f64,
    /// Bulk volume viscosities (poise).
    pub eta_v: f64,
    pub eta_l: f64,
    /// Liquid dynamic viscosity (poise); carried for the tangential balance
    /// alongside the jump data.
    pub mu_l: f64,
    /// Static surface tension at the local temperature.
    pub h_static: f64,
}

/// Output of [`laplace_jump`]. `dp` is the sum of the two terms by
/// definition, bit-exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpResult {
    /// Viscous dynamical surface tension `K`.
    pub k_dyn: f64,
    /// Pressure difference `P_l - P_v`.
    pub dp: f64,
    /// `Q^2 (1/rho_v - 1/rho_l)`.
    pub inertial_term: f64,
    /// `2 K / R_m`; zero for the planar sentinel.
    pub capillary_term: f64,
}

/// Viscous dynamical surface tension
/// `K = H - Q (eta_l/rho_l - eta_v/rho_v)`.
pub fn viscous_tension(
    h_static: f64,
    q: f64,
    eta_l: f64,
    rho_l: f64,
    eta_v: f64,
    rho_v: f64,
) -> Result<f64> {
    for (what, rho) in [("rho_l", rho_l), ("rho_v", rho_v)] {
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter { what, value: rho });
        }
    }
    Ok(h_static - q * (eta_l / rho_l - eta_v / rho_v))
}

/// Extended Laplace jump.
pub fn laplace_jump(inputs: &JumpInputs) -> Result<JumpResult> {
    if !(inputs.rho_v > 0.0 && inputs.rho_l > inputs.rho_v) {
        return Err(Error::OutOfRange {
            what: "bulk densities (need 0 < rho_v < rho_l)",
            value: inputs.rho_v,
            lo: 0.0,
            hi: inputs.rho_l,
        });
    }
    if inputs.r_m == 0.0 || inputs.r_m.is_nan() {
        return Err(Error::InvalidParameter {
            what: "r_m (finite nonzero, or infinity for planar)",
            value: inputs.r_m,
        });
    }
    let k_dyn = viscous_tension(
        inputs.h_static,
        inputs.q,
        inputs.eta_l,
        inputs.rho_l,
        inputs.eta_v,
        inputs.rho_v,
    )?;
    let inertial_term = inputs.q * inputs.q * (1.0 / inputs.rho_v - 1.0 / inputs.rho_l);
    let capillary_term = if inputs.r_m.is_infinite() {
        0.0
    } else {
        2.0 * k_dyn / inputs.r_m
    };
    Ok(JumpResult {
        k_dyn,
        dp: inertial_term + capillary_term,
        inertial_term,
        capillary_term,
    })
}

/// Tangential strain components `(D_13, D_23)` on the liquid side demanded
/// by the Marangoni balance `grad_tg H + 2 mu_l D e_3 = 0`; only the two
/// tangential components of `D e_3` survive when no mass crosses the layer.
pub fn marangoni_shear(grad_tg_h: [f64; 2], mu_l: f64) -> Result<[f64; 2]> {
    if !(mu_l > 0.0) {
        return Err(Error::InvalidParameter {
            what: "mu_l",
            value: mu_l,
        });
    }
    Ok([
        -grad_tg_h[0] / (2.0 * mu_l),
        -grad_tg_h[1] / (2.0 * mu_l),
    ])
}

/// `dH/dT` by a central difference of the equilibrium tension, used to turn
/// an along-interface temperature profile into `grad_tg H = (dH/dT)(dT/ds)`.
pub fn tension_temperature_gradient(fp: &FluidParams, temp: f64, dtemp: f64) -> Result<f64> {
    let t_c = fp.critical().temp;
    if !(dtemp > 0.0) {
        return Err(Error::InvalidParameter {
            what: "dtemp",
            value: dtemp,
        });
    }
    if !(temp - dtemp > 0.0 && temp + dtemp < t_c) {
        return Err(Error::OutOfRange {
            what: "temp +- dtemp (stencil must stay subcritical)",
            value: temp,
            lo: dtemp,
            hi: t_c - dtemp,
        });
    }
    let hi = surface_tension(fp, &maxwell_construction(fp, temp + dtemp)?)?;
    let lo = surface_tension(fp, &maxwell_construction(fp, temp - dtemp)?)?;
    Ok((hi.h_static - lo.h_static) / (2.0 * dtemp))
}

/// Endpoint and interior magnitudes of the two layer terms that must die out
/// in the bulks for the jump relation to close: the capillary bracket
/// `lambda (rho lap(rho) - (grad rho)^2 / 2)` and the viscous bracket
/// `Q (eta + 2 mu) (d rho/dz) / rho^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerEdgeTerms {
    pub capillary_vapour_end: f64,
    pub capillary_liquid_end: f64,
    pub capillary_interior_max: f64,
    pub viscous_vapour_end: f64,
    pub viscous_liquid_end: f64,
    pub viscous_interior_max: f64,
}

impl LayerEdgeTerms {
    /// Worst endpoint magnitude relative to the interior maximum of the
    /// capillary bracket.
    pub fn capillary_decay_ratio(&self) -> f64 {
        let end = f64::max(self.capillary_vapour_end, self.capillary_liquid_end);
        if self.capillary_interior_max == 0.0 {
            0.0
        } else {
            end / self.capillary_interior_max
        }
    }

    pub fn viscous_decay_ratio(&self) -> f64 {
        let end = f64::max(self.viscous_vapour_end, self.viscous_liquid_end);
        if self.viscous_interior_max == 0.0 {
            0.0
        } else {
            end / self.viscous_interior_max
        }
    }
}

/// Evaluates the two bulk-vanishing brackets on a truncated equilibrium
/// profile.
///
/// The profile satisfies `lambda rho'' = mu_chem(rho) - mu_chem(rho_v)`
/// pointwise, so the second derivative comes from that identity and the
/// curvature correction `lap = rho'' - (2/R_m) rho'` is applied on top of
/// the planar profile. Endpoint magnitudes shrink linearly with the tail
/// truncation offset.
pub fn layer_edge_terms(
    fp: &FluidParams,
    profile: &InterfaceProfile,
    q: f64,
    r_m: f64,
) -> Result<LayerEdgeTerms> {
    let m = profile.len();
    if m < 64 {
        return Err(Error::TooFewSamples { got: m, need: 64 });
    }
    if r_m == 0.0 || r_m.is_nan() {
        return Err(Error::InvalidParameter {
            what: "r_m (finite nonzero, or infinity for planar)",
            value: r_m,
        });
    }
    let curvature = if r_m.is_infinite() { 0.0 } else { 2.0 / r_m };
    let temp = profile.coex.temp;
    let mu_chem_v = fp.chemical_potential_raw(profile.coex.rho_v, temp);

    let mut capillary = [0.0f64; 2];
    let mut viscous = [0.0f64; 2];
    let mut capillary_max: f64 = 0.0;
    let mut viscous_max: f64 = 0.0;
    for j in 0..m {
        let rho = profile.rho[j];
        let grad = profile.drho_dz[j];
        let lap = (fp.chemical_potential_raw(rho, temp) - mu_chem_v) / fp.lambda - curvature * grad;
        let cap = math::abs(fp.lambda * (rho * lap - 0.5 * grad * grad));
        let visc = math::abs(q * (fp.eta(rho) + 2.0 * fp.mu(rho)) * grad / (rho * rho));
        if j == 0 {
            capillary[0] = cap;
            viscous[0] = visc;
        }
        if j == m - 1 {
            capillary[1] = cap;
            viscous[1] = visc;
        }
        capillary_max = capillary_max.max(cap);
        viscous_max = viscous_max.max(visc);
    }

    Ok(LayerEdgeTerms {
        capillary_vapour_end: capillary[0],
        capillary_liquid_end: capillary[1],
        capillary_interior_max: capillary_max,
        viscous_vapour_end: viscous[0],
        viscous_liquid_end: viscous[1],
        viscous_interior_max: viscous_max,
    })
}
