//! Van der Waals equation of state in specific (per-mass) variables, plus the
//! thermodynamic potentials derived from it.
//!
//! Pressure is `P = rho r T / (1 - b rho) - a rho^2`. The matching specific
//! free energy `alpha(rho, T) = r T ln(rho / (1 - b rho)) - a rho` drops
//! temperature-only additive terms and is chosen so that
//! `rho^2 d(alpha)/d(rho) = P` holds exactly; everything downstream uses only
//! density derivatives or differences of `alpha` at fixed temperature.
//!
//! Two unit systems are supported: plain c.g.s., and reduced units with
//! `a = 3`, `b = 1/3`, `r = 8/3`, which place the critical point at
//! `(rho, T, P) = (1, 1, 1)`.

use crate::error::{Error, Result};
use crate::math;

/// Unit system tag carried by [`FluidParams`]. Purely informational: all
/// formulas are identical, reduced mode is a rescaling of the constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Cgs,
    Reduced,
}

/// Affine-in-density viscosity law `visc(rho) = c0 + c1 rho`.
///
/// Covers the two supported inputs: a constant coefficient and a two-point
/// (bulk) table interpolated linearly in density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityLaw {
    c0: f64,
    c1: f64,
}

impl ViscosityLaw {
    pub fn constant(value: f64) -> Self {
        ViscosityLaw { c0: value, c1: 0.0 }
    }

    pub fn affine(intercept: f64, slope: f64) -> Self {
        ViscosityLaw {
            c0: intercept,
            c1: slope,
        }
    }

    /// Affine law through `(rho_1, visc_1)` and `(rho_2, visc_2)`.
    pub fn through_points(rho_1: f64, visc_1: f64, rho_2: f64, visc_2: f64) -> Result<Self> {
        if rho_1 == rho_2 {
            return Err(Error::InvalidParameter {
                what: "viscosity table densities (must differ)",
                value: rho_1,
            });
        }
        let slope = (visc_2 - visc_1) / (rho_2 - rho_1);
        Ok(ViscosityLaw {
            c0: visc_1 - slope * rho_1,
            c1: slope,
        })
    }

    pub fn eval(&self, rho: f64) -> f64 {
        self.c0 + self.c1 * rho
    }
}

/// Volume (second) viscosity law. `Stokes` ties it to the dynamic viscosity
/// as `eta = -(2/3) mu`, which makes pure dilation dissipation-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaLaw {
    Stokes,
    Explicit(ViscosityLaw),
}

/// A density/temperature state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    /// Mass density (g/cm^3 or reduced).
    pub rho: f64,
    /// Absolute temperature (K or reduced).
    pub temp: f64,
}

impl ThermoPoint {
    pub fn new(rho: f64, temp: f64) -> Self {
        ThermoPoint { rho, temp }
    }
}

/// Critical point of the fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub rho: f64,
    pub temp: f64,
    pub pressure: f64,
}

/// Equation-of-state constants, capillarity coefficient and viscosity laws.
///
/// Immutable after construction; all methods are pure functions of their
/// arguments and safe to call concurrently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    /// Attraction constant (pressure volume^2 / mass^2).
    pub a: f64,
    /// Covolume (volume/mass); densities live in (0, 1/b).
    pub b: f64,
    /// Specific gas constant (erg/(g K)).
    pub r_specific: f64,
    /// Capillarity coefficient of the square-gradient energy term.
    pub lambda: f64,
    /// Dynamic viscosity law rho -> mu(rho) (poise).
    pub visc_mu: ViscosityLaw,
    /// Volume viscosity law rho -> eta(rho) (poise).
    pub visc_eta: EtaLaw,
    pub units: Units,
}

impl FluidParams {
    pub fn new(
        a: f64,
        b: f64,
        r_specific: f64,
        lambda: f64,
        visc_mu: ViscosityLaw,
        visc_eta: EtaLaw,
        units: Units,
    ) -> Result<Self> {
        let fp = FluidParams {
            a,
            b,
            r_specific,
            lambda,
            visc_mu,
            visc_eta,
            units,
        };
        fp.validate()?;
        Ok(fp)
    }

    /// Reduced-unit fluid: critical point at (1, 1, 1). The default dynamic
    /// viscosity is a constant 0.01 with the Stokes volume viscosity; replace
    /// the laws for anything viscosity-sensitive.
    pub fn reduced(lambda: f64) -> Self {
        FluidParams {
            a: 3.0,
            b: 1.0 / 3.0,
            r_specific: 8.0 / 3.0,
            lambda,
            visc_mu: ViscosityLaw::constant(0.01),
            visc_eta: EtaLaw::Stokes,
            units: Units::Reduced,
        }
    }

    fn validate(&self) -> Result<()> {
        for (what, value) in [
            ("a", self.a),
            ("b", self.b),
            ("r_specific", self.r_specific),
            ("lambda", self.lambda),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { what, value });
            }
        }
        // Affine laws attain their extrema at the interval ends, so checking
        // rho = 0 and rho = 1/b covers the whole admissible range.
        let hi = self.max_density();
        for rho in [0.0, hi] {
            let mu = self.visc_mu.eval(rho);
            if !(mu > 0.0) {
                return Err(Error::InvalidParameter {
                    what: "mu(rho) (must be positive on [0, 1/b))",
                    value: mu,
                });
            }
            let eta = self.eta(rho);
            if !(eta + 2.0 * mu > 0.0) {
                return Err(Error::InvalidParameter {
                    what: "eta(rho) + 2 mu(rho) (must be positive)",
                    value: eta + 2.0 * mu,
                });
            }
        }
        Ok(())
    }

    /// Covolume bound `1/b`; densities must stay strictly below it.
    pub fn max_density(&self) -> f64 {
        1.0 / self.b
    }

    pub fn critical(&self) -> CriticalPoint {
        CriticalPoint {
            rho: 1.0 / (3.0 * self.b),
            temp: 8.0 * self.a / (27.0 * self.b * self.r_specific),
            pressure: self.a / (27.0 * self.b * self.b),
        }
    }

    /// Dynamic viscosity at a density.
    pub fn mu(&self, rho: f64) -> f64 {
        self.visc_mu.eval(rho)
    }

    /// Volume viscosity at a density.
    pub fn eta(&self, rho: f64) -> f64 {
        match self.visc_eta {
            EtaLaw::Stokes => -(2.0 / 3.0) * self.visc_mu.eval(rho),
            EtaLaw::Explicit(law) => law.eval(rho),
        }
    }

    /// Checks the covolume bound and temperature positivity.
    pub fn check_point(&self, pt: ThermoPoint) -> Result<()> {
        if !(pt.rho > 0.0 && pt.rho < self.max_density()) {
            return Err(Error::CovolumeBound {
                rho: pt.rho,
                max_rho: self.max_density(),
            });
        }
        if !(pt.temp > 0.0) {
            return Err(Error::InvalidParameter {
                what: "temp",
                value: pt.temp,
            });
        }
        Ok(())
    }

    pub(crate) fn pressure_raw(&self, rho: f64, temp: f64) -> f64 {
        rho * self.r_specific * temp / (1.0 - self.b * rho) - self.a * rho * rho
    }

    pub(crate) fn dpressure_drho_raw(&self, rho: f64, temp: f64) -> f64 {
        let g = 1.0 - self.b * rho;
        self.r_specific * temp / (g * g) - 2.0 * self.a * rho
    }

    fn d2pressure_drho2_raw(&self, rho: f64, temp: f64) -> f64 {
        let g = 1.0 - self.b * rho;
        2.0 * self.b * self.r_specific * temp / (g * g * g) - 2.0 * self.a
    }

    pub(crate) fn alpha_raw(&self, rho: f64, temp: f64) -> f64 {
        self.r_specific * temp * math::ln(rho / (1.0 - self.b * rho)) - self.a * rho
    }

    pub(crate) fn chemical_potential_raw(&self, rho: f64, temp: f64) -> f64 {
        self.alpha_raw(rho, temp) + self.pressure_raw(rho, temp) / rho
    }

    /// Pressure `P(rho, T)`.
    pub fn pressure(&self, pt: ThermoPoint) -> Result<f64> {
        self.check_point(pt)?;
        Ok(self.pressure_raw(pt.rho, pt.temp))
    }

    /// Analytic `dP/drho` at fixed temperature.
    pub fn dpressure_drho(&self, pt: ThermoPoint) -> Result<f64> {
        self.check_point(pt)?;
        Ok(self.dpressure_drho_raw(pt.rho, pt.temp))
    }

    /// Analytic `d^2P/drho^2` at fixed temperature.
    pub fn d2pressure_drho2(&self, pt: ThermoPoint) -> Result<f64> {
        self.check_point(pt)?;
        Ok(self.d2pressure_drho2_raw(pt.rho, pt.temp))
    }

    /// Specific free energy `alpha(rho, T)`, temperature-only terms dropped.
    pub fn specific_free_energy(&self, pt: ThermoPoint) -> Result<f64> {
        self.check_point(pt)?;
        Ok(self.alpha_raw(pt.rho, pt.temp))
    }

    /// Chemical potential `alpha + P/rho`; equal in both bulks at coexistence.
    pub fn chemical_potential(&self, pt: ThermoPoint) -> Result<f64> {
        self.check_point(pt)?;
        Ok(self.chemical_potential_raw(pt.rho, pt.temp))
    }

    /// The two spinodal densities where `dP/drho = 0`, bracketing the
    /// mechanically unstable branch. Each root is polished with Newton steps
    /// on the analytic derivative to `|dP/drho| < 1e-12 P_c`.
    pub fn spinodal(&self, temp: f64) -> Result<(f64, f64)> {
        let crit = self.critical();
        if !(temp > 0.0) {
            return Err(Error::InvalidParameter {
                what: "temp",
                value: temp,
            });
        }
        if temp >= crit.temp {
            return Err(Error::Supercritical {
                temp,
                t_c: crit.temp,
            });
        }

        let dp = |rho: f64| self.dpressure_drho_raw(rho, temp);
        // dP/drho is positive at both ends of (0, 1/b) and negative at the
        // critical density for any subcritical temperature.
        let lo_bracket = (crit.rho * 1e-9, crit.rho);
        let hi_bracket = (crit.rho, self.max_density() * (1.0 - 1e-9));
        let mut low = crate::numerics::find_root(dp, lo_bracket, 0.0)?;
        let mut high = crate::numerics::find_root(dp, hi_bracket, 0.0)?;

        for root in [&mut low, &mut high] {
            for _ in 0..4 {
                let d2 = self.d2pressure_drho2_raw(*root, temp);
                if d2 == 0.0 {
                    break;
                }
                let step = dp(*root) / d2;
                let next = *root - step;
                if next > 0.0 && next < self.max_density() {
                    *root = next;
                }
            }
        }
        Ok((low, high))
    }
}
