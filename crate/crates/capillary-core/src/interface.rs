//! Planar equilibrium density profile across the capillary layer, and the
//! static surface tension and partial tensions by quadrature.
//!
//! Everything rests on the first integral of the equilibrium balance:
//! `(lambda/2) (d rho/dz)^2 = W(rho)` where `W` is the excess free energy per
//! unit volume over the common-tangent plane of the two bulks. `W` vanishes
//! quadratically at both coexistence densities, so the position `z(rho)`
//! diverges logarithmically into the bulks and the tension integrand
//! `sqrt(W)` stays finite with a linear zero at each end.

use alloc::vec::Vec;

use crate::coexistence::CoexistenceState;
use crate::eos::FluidParams;
use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{self, QuadratureSpec};

/// Which bulk the excess free energy is referenced to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Vapour,
    Liquid,
}

/// Sampled planar profile through the capillary layer. `z = 0` at the median
/// density `rho_i = (rho_v + rho_l)/2`; density increases strictly with `z`
/// (vapour on the left, liquid on the right).
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceProfile {
    /// Positions (cm or reduced).
    pub z: Vec<f64>,
    /// Densities, strictly increasing.
    pub rho: Vec<f64>,
    /// Density gradient at each sample, from the first integral.
    pub drho_dz: Vec<f64>,
    /// `z(90% density) - z(10% density)`; the finite surrogate for the
    /// infinite exponential tails.
    pub thickness_10_90: f64,
    /// Coexistence state the profile was built from.
    pub coex: CoexistenceState,
    /// Relative density offset at which the tails were truncated.
    pub tail_cut: f64,
    /// True if numerical noise drove the excess free energy negative at some
    /// sample and the gradient was clamped to zero there.
    pub tail_clamped: bool,
}

impl InterfaceProfile {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Median density where `z = 0`.
    pub fn rho_mid(&self) -> f64 {
        0.5 * (self.coex.rho_v + self.coex.rho_l)
    }
}

/// Static surface tension split at the median density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensionResult {
    /// Total static tension (dyn/cm or reduced).
    pub h_static: f64,
    /// Vapour-side integral, from `rho_v` to `rho_i`.
    pub branch_v: f64,
    /// Liquid-side integral, from `rho_i` to `rho_l`.
    pub branch_l: f64,
    pub temp: f64,
}

fn check_in_layer(rho: f64, coex: &CoexistenceState) -> Result<()> {
    if !(rho >= coex.rho_v && rho <= coex.rho_l) {
        return Err(Error::OutOfRange {
            what: "rho (must lie between the bulk densities)",
            value: rho,
            lo: coex.rho_v,
            hi: coex.rho_l,
        });
    }
    Ok(())
}

/// `W` has a double zero at its anchor, so the naive difference of free
/// energies cancels catastrophically there; the log1p form keeps the
/// relative error at ~eps/(rho - rho_ref) and the tail quadratures smooth.
fn w_raw(fp: &FluidParams, rho: f64, rho_ref: f64, temp: f64, p0: f64) -> f64 {
    let e = rho - rho_ref;
    let log_ratio = math::ln_1p(e / rho_ref) + math::ln_1p(fp.b * e / (1.0 - fp.b * rho));
    rho * (fp.r_specific * temp * log_ratio - fp.a * e) - p0 * e / rho_ref
}

/// Excess free energy per unit volume over the tangent plane anchored at the
/// chosen bulk:
/// `W(rho) = rho (alpha(rho) - alpha(rho_ref)) + p0 (1 - rho/rho_ref)`,
/// the closed form of `rho * integral_{rho_ref}^{rho} (P - p0)/u^2 du`.
///
/// At coexistence the two sides agree everywhere and both vanish at both
/// bulk densities; numerically each side is exact at its own anchor.
pub fn excess_w(fp: &FluidParams, rho: f64, side: Side, coex: &CoexistenceState) -> Result<f64> {
    check_in_layer(rho, coex)?;
    let rho_ref = match side {
        Side::Vapour => coex.rho_v,
        Side::Liquid => coex.rho_l,
    };
    Ok(w_raw(fp, rho, rho_ref, coex.temp, coex.p0))
}

/// Branch anchor used at a given density: vapour side at or below the
/// median, liquid side above.
fn branch_ref(rho: f64, coex: &CoexistenceState) -> f64 {
    let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
    if rho <= rho_i {
        coex.rho_v
    } else {
        coex.rho_l
    }
}

/// Density gradient `sqrt(2 W(rho)/lambda)` from the first integral.
///
/// Zero at the bulk densities; negative `W` from rounding noise very close
/// to the bulks is clamped to zero.
pub fn density_gradient(fp: &FluidParams, rho: f64, coex: &CoexistenceState) -> Result<f64> {
    check_in_layer(rho, coex)?;
    let w = w_raw(fp, rho, branch_ref(rho, coex), coex.temp, coex.p0);
    Ok(math::sqrt(f64::max(2.0 * w / fp.lambda, 0.0)))
}

/// `dz/d(rho) = sqrt(lambda / (2 W))` on the branch that owns `rho`.
fn inverse_gradient(fp: &FluidParams, rho: f64, coex: &CoexistenceState) -> f64 {
    let w = w_raw(fp, rho, branch_ref(rho, coex), coex.temp, coex.p0);
    math::sqrt(fp.lambda / (2.0 * f64::max(w, f64::MIN_POSITIVE)))
}

/// Grid clustering strength for [`build_profile`].
///
/// The sample grid is tanh-spaced in density. The strength is chosen so the
/// first density step beside the truncated tail is about half the truncation
/// offset itself; that keeps the z-steps bounded along the logarithmic tails
/// (a fixed-strength grid would jump several decades in one panel).
fn cluster_strength(tail_cut: f64) -> f64 {
    let g = |c: f64| {
        let sech = 1.0 / math::cosh(c);
        c * sech * sech / math::tanh(c)
    };
    let target = 1000.0 * tail_cut;
    if target >= g(2.0) {
        return 2.0;
    }
    numerics::find_root(|c| g(c) - target, (2.0, 40.0), 0.0).unwrap_or(2.0)
}

/// Reconstructs the planar profile by integrating `z(rho)` outward from the
/// median density on both branches.
///
/// `n_points` is rounded up to the next odd count so the median density is a
/// sample. Tails are truncated at `rho_v + tail_cut * (rho_l - rho_v)` and
/// symmetrically on the liquid side, since `z` diverges logarithmically at
/// the bulks.
pub fn build_profile(
    fp: &FluidParams,
    coex: &CoexistenceState,
    n_points: usize,
    tail_cut: f64,
) -> Result<InterfaceProfile> {
    if n_points < 16 {
        return Err(Error::TooFewSamples {
            got: n_points,
            need: 16,
        });
    }
    if !(tail_cut > 0.0 && tail_cut < 0.1) {
        return Err(Error::OutOfRange {
            what: "tail_cut",
            value: tail_cut,
            lo: 0.0,
            hi: 0.1,
        });
    }
    coex.validate(fp)?;

    let m = if n_points % 2 == 0 {
        n_points + 1
    } else {
        n_points
    };
    let mid = (m - 1) / 2;
    let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
    let delta_rho = coex.rho_l - coex.rho_v;
    let amplitude = 0.5 * delta_rho * (1.0 - 2.0 * tail_cut);
    let c = cluster_strength(tail_cut);
    let tanh_c = math::tanh(c);

    let mut rho = Vec::with_capacity(m);
    for j in 0..m {
        let s = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
        rho.push(rho_i + amplitude * math::tanh(c * s) / tanh_c);
    }

    let mut drho_dz = Vec::with_capacity(m);
    let mut tail_clamped = false;
    for &r in &rho {
        let w = w_raw(fp, r, branch_ref(r, coex), coex.temp, coex.p0);
        if w < 0.0 {
            tail_clamped = true;
        }
        drho_dz.push(math::sqrt(f64::max(2.0 * w / fp.lambda, 0.0)));
    }

    // z by panel-wise adaptive quadrature of dz/d(rho), outward from rho_i.
    let spec = QuadratureSpec::default();
    let mut z = alloc::vec![0.0; m];
    for j in (mid + 1)..m {
        let panel = numerics::integrate(
            |u| inverse_gradient(fp, u, coex),
            rho[j - 1],
            rho[j],
            &spec,
        )?;
        z[j] = z[j - 1] + panel.value;
    }
    for j in (0..mid).rev() {
        let panel = numerics::integrate(
            |u| inverse_gradient(fp, u, coex),
            rho[j],
            rho[j + 1],
            &spec,
        )?;
        z[j] = z[j + 1] - panel.value;
    }

    let thickness_10_90 = thickness(fp, coex, 0.1, 0.9)?;

    Ok(InterfaceProfile {
        z,
        rho,
        drho_dz,
        thickness_10_90,
        coex: *coex,
        tail_cut,
        tail_clamped,
    })
}

/// Distance in `z` between two relative density levels, by direct quadrature
/// of `dz/d(rho)` (split at the median so each branch uses its own anchor).
fn thickness(fp: &FluidParams, coex: &CoexistenceState, lo_frac: f64, hi_frac: f64) -> Result<f64> {
    let delta_rho = coex.rho_l - coex.rho_v;
    let rho_lo = coex.rho_v + lo_frac * delta_rho;
    let rho_hi = coex.rho_v + hi_frac * delta_rho;
    let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
    let spec = QuadratureSpec::default();
    let f = |u: f64| inverse_gradient(fp, u, coex);
    let left = numerics::integrate(f, rho_lo, rho_i, &spec)?;
    let right = numerics::integrate(f, rho_i, rho_hi, &spec)?;
    Ok(left.value + right.value)
}

/// Static surface tension
/// `H = sqrt(2 lambda) [ integral_{rho_v}^{rho_i} sqrt(W_v) +
/// integral_{rho_i}^{rho_l} sqrt(W_l) ]`.
///
/// The integrands vanish linearly at the bulk densities, so plain adaptive
/// quadrature at relative tolerance 1e-9 is enough; no substitution needed.
pub fn surface_tension(fp: &FluidParams, coex: &CoexistenceState) -> Result<TensionResult> {
    coex.validate(fp)?;
    let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
    let spec = QuadratureSpec::default();
    let scale = math::sqrt(2.0 * fp.lambda);

    let v = numerics::integrate(
        |u| math::sqrt(f64::max(w_raw(fp, u, coex.rho_v, coex.temp, coex.p0), 0.0)),
        coex.rho_v,
        rho_i,
        &spec,
    )?;
    let l = numerics::integrate(
        |u| math::sqrt(f64::max(w_raw(fp, u, coex.rho_l, coex.temp, coex.p0), 0.0)),
        rho_i,
        coex.rho_l,
        &spec,
    )?;
    Ok(TensionResult {
        h_static: scale * (v.value + l.value),
        branch_v: scale * v.value,
        branch_l: scale * l.value,
        temp: coex.temp,
    })
}

/// Running tension integral from the chosen bulk up to `rho_upto`:
/// vapour side `sqrt(2 lambda) integral_{rho_v}^{rho}`, liquid side
/// `sqrt(2 lambda) integral_{rho}^{rho_l}`. The two sides meet at the median
/// density, where they sum to the full tension.
pub fn partial_tension(
    fp: &FluidParams,
    rho_upto: f64,
    side: Side,
    coex: &CoexistenceState,
) -> Result<f64> {
    let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
    let spec = QuadratureSpec::default();
    let scale = math::sqrt(2.0 * fp.lambda);
    match side {
        Side::Vapour => {
            if !(rho_upto >= coex.rho_v && rho_upto <= rho_i) {
                return Err(Error::OutOfRange {
                    what: "rho_upto (vapour branch runs from rho_v to the median)",
                    value: rho_upto,
                    lo: coex.rho_v,
                    hi: rho_i,
                });
            }
            if rho_upto == coex.rho_v {
                return Ok(0.0);
            }
            let q = numerics::integrate(
                |u| math::sqrt(f64::max(w_raw(fp, u, coex.rho_v, coex.temp, coex.p0), 0.0)),
                coex.rho_v,
                rho_upto,
                &spec,
            )?;
            Ok(scale * q.value)
        }
        Side::Liquid => {
            if !(rho_upto >= rho_i && rho_upto <= coex.rho_l) {
                return Err(Error::OutOfRange {
                    what: "rho_upto (liquid branch runs from the median to rho_l)",
                    value: rho_upto,
                    lo: rho_i,
                    hi: coex.rho_l,
                });
            }
            if rho_upto == coex.rho_l {
                return Ok(0.0);
            }
            let q = numerics::integrate(
                |u| math::sqrt(f64::max(w_raw(fp, u, coex.rho_l, coex.temp, coex.p0), 0.0)),
                rho_upto,
                coex.rho_l,
                &spec,
            )?;
            Ok(scale * q.value)
        }
    }
}

/// Pointwise residual of the interior balance
/// `lambda d2(rho)/dz2 = mu_chem(rho) - mu_chem(rho_v)` on a sampled profile,
/// with the second derivative taken as a three-point difference on the
/// (non-uniform) z grid. Returns one value per interior sample.
pub fn interior_residual(fp: &FluidParams, profile: &InterfaceProfile) -> Result<Vec<f64>> {
    let m = profile.len();
    if m < 5 {
        return Err(Error::TooFewSamples { got: m, need: 5 });
    }
    let temp = profile.coex.temp;
    let mu_v = fp.chemical_potential_raw(profile.coex.rho_v, temp);
    let mut out = Vec::with_capacity(m - 2);
    for j in 1..m - 1 {
        let h_m = profile.z[j] - profile.z[j - 1];
        let h_p = profile.z[j + 1] - profile.z[j];
        let second = 2.0
            * (profile.rho[j - 1] * h_p - profile.rho[j] * (h_m + h_p) + profile.rho[j + 1] * h_m)
            / (h_m * h_p * (h_m + h_p));
        let mu_diff = fp.chemical_potential_raw(profile.rho[j], temp) - mu_v;
        out.push(fp.lambda * second - mu_diff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coexistence::maxwell_construction;

    fn reduced() -> FluidParams {
        FluidParams::reduced(1.0)
    }

    fn coex_at(temp: f64) -> CoexistenceState {
        maxwell_construction(&reduced(), temp).unwrap()
    }

    fn max_w(fp: &FluidParams, coex: &CoexistenceState) -> f64 {
        let mut w_max: f64 = 0.0;
        for i in 1..400 {
            let rho = coex.rho_v + (coex.rho_l - coex.rho_v) * i as f64 / 400.0;
            let side = if rho <= 0.5 * (coex.rho_v + coex.rho_l) {
                Side::Vapour
            } else {
                Side::Liquid
            };
            w_max = w_max.max(excess_w(fp, rho, side, coex).unwrap());
        }
        w_max
    }

    #[test]
    fn excess_w_zero_at_both_bulks() {
        let fp = reduced();
        let coex = coex_at(0.9);
        assert_eq!(excess_w(&fp, coex.rho_v, Side::Vapour, &coex).unwrap(), 0.0);
        assert_eq!(excess_w(&fp, coex.rho_l, Side::Liquid, &coex).unwrap(), 0.0);
        // Cross-bulk zero is forced by the equal-area invariant, not exact.
        let w_max = max_w(&fp, &coex);
        let cross = excess_w(&fp, coex.rho_l, Side::Vapour, &coex).unwrap();
        assert!(cross.abs() < 1e-9 * w_max, "cross-bulk W = {cross}");
        let cross = excess_w(&fp, coex.rho_v, Side::Liquid, &coex).unwrap();
        assert!(cross.abs() < 1e-9 * w_max, "cross-bulk W = {cross}");
    }

    #[test]
    fn excess_w_positive_inside_layer() {
        let fp = reduced();
        let coex = coex_at(0.9);
        for i in 1..100 {
            let rho = coex.rho_v + (coex.rho_l - coex.rho_v) * i as f64 / 100.0;
            for side in [Side::Vapour, Side::Liquid] {
                let w = excess_w(&fp, rho, side, &coex).unwrap();
                assert!(w > 0.0, "W({rho}) = {w} on {side:?}");
            }
        }
    }

    #[test]
    fn excess_w_matches_quadrature_oracle() {
        // W(rho) = rho * integral_{rho_v}^{rho} (P - p0)/u^2 du, evaluated
        // independently with the adaptive integrator.
        let fp = reduced();
        let coex = coex_at(0.9);
        let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
        let closed = excess_w(&fp, rho_i, Side::Vapour, &coex).unwrap();
        let q = numerics::integrate(
            |u| (fp.pressure_raw(u, coex.temp) - coex.p0) / (u * u),
            coex.rho_v,
            rho_i,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let oracle = rho_i * q.value;
        assert!(
            (closed - oracle).abs() <= 1e-10 * closed.abs(),
            "closed {closed} vs quadrature {oracle}"
        );
    }

    #[test]
    fn excess_w_rejects_outside_layer() {
        let fp = reduced();
        let coex = coex_at(0.9);
        assert!(excess_w(&fp, coex.rho_v - 0.01, Side::Vapour, &coex).is_err());
        assert!(excess_w(&fp, coex.rho_l + 0.01, Side::Liquid, &coex).is_err());
    }

    #[test]
    fn gradient_endpoints_and_midpoint() {
        let fp = reduced();
        let coex = coex_at(0.9);
        assert_eq!(density_gradient(&fp, coex.rho_v, &coex).unwrap(), 0.0);
        assert_eq!(density_gradient(&fp, coex.rho_l, &coex).unwrap(), 0.0);

        let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
        let w = excess_w(&fp, rho_i, Side::Vapour, &coex).unwrap();
        let g = density_gradient(&fp, rho_i, &coex).unwrap();
        assert!((g - (2.0 * w / fp.lambda).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gradient_lambda_scaling() {
        let fp1 = reduced();
        let mut fp2 = fp1;
        fp2.lambda = 2.0;
        let coex = coex_at(0.9);
        for i in 1..20 {
            let rho = coex.rho_v + (coex.rho_l - coex.rho_v) * i as f64 / 20.0;
            let g1 = density_gradient(&fp1, rho, &coex).unwrap();
            let g2 = density_gradient(&fp2, rho, &coex).unwrap();
            assert!((g2 * 2f64.sqrt() - g1).abs() <= 1e-14 * g1.abs());
        }
    }

    #[test]
    fn profile_first_integral_invariant() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let profile = build_profile(&fp, &coex, 801, 1e-6).unwrap();
        let w_max = max_w(&fp, &coex);
        for (j, (&rho, &g)) in profile.rho.iter().zip(&profile.drho_dz).enumerate() {
            let side = if rho <= profile.rho_mid() {
                Side::Vapour
            } else {
                Side::Liquid
            };
            let w = excess_w(&fp, rho, side, &coex).unwrap();
            let diff = (0.5 * fp.lambda * g * g - w).abs();
            assert!(
                diff < 1e-8 * w_max,
                "first integral broken at sample {j}: |diff| = {diff}"
            );
        }
    }

    #[test]
    fn profile_shape() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let profile = build_profile(&fp, &coex, 200, 1e-6).unwrap();
        // Even request rounds up so the median density is a sample.
        assert_eq!(profile.len(), 201);
        let mid = (profile.len() - 1) / 2;
        assert_eq!(profile.z[mid], 0.0);
        assert_eq!(profile.rho[mid], profile.rho_mid());
        for j in 1..profile.len() {
            assert!(profile.rho[j] > profile.rho[j - 1], "rho not increasing");
            assert!(profile.z[j] > profile.z[j - 1], "z not increasing");
        }
        assert!(!profile.tail_clamped);
    }

    #[test]
    fn profile_rejects_bad_inputs() {
        let fp = reduced();
        let coex = coex_at(0.9);
        assert!(matches!(
            build_profile(&fp, &coex, 8, 1e-6),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(build_profile(&fp, &coex, 100, 0.0).is_err());
        assert!(build_profile(&fp, &coex, 100, 0.2).is_err());

        let mut broken = coex;
        broken.rho_l += 0.05;
        assert!(build_profile(&fp, &broken, 100, 1e-6).is_err());
    }

    #[test]
    fn thickness_matches_brute_force_trapezoid() {
        // Independent oracle: 10^6 trapezoid panels of dz/d(rho) between the
        // 10% and 90% density levels.
        let fp = reduced();
        let coex = coex_at(0.9);
        let profile = build_profile(&fp, &coex, 101, 1e-6).unwrap();

        let delta = coex.rho_l - coex.rho_v;
        let (lo, hi) = (coex.rho_v + 0.1 * delta, coex.rho_v + 0.9 * delta);
        let n = 1_000_000usize;
        let h = (hi - lo) / n as f64;
        let f = |rho: f64| 1.0 / density_gradient(&fp, rho, &coex).unwrap();
        let mut sum = 0.5 * (f(lo) + f(hi));
        for i in 1..n {
            sum += f(lo + h * i as f64);
        }
        let oracle = sum * h;
        let rel = (profile.thickness_10_90 - oracle).abs() / oracle;
        assert!(
            rel < 1e-5,
            "thickness {} vs oracle {oracle}, rel {rel}",
            profile.thickness_10_90
        );
    }

    #[test]
    fn thickness_lambda_scaling_and_critical_growth() {
        let fp1 = reduced();
        let mut fp2 = fp1;
        fp2.lambda = 2.0;
        let coex = coex_at(0.9);
        let t1 = build_profile(&fp1, &coex, 101, 1e-6).unwrap().thickness_10_90;
        let t2 = build_profile(&fp2, &coex, 101, 1e-6).unwrap().thickness_10_90;
        assert!(
            (t2 / t1 - 2f64.sqrt()).abs() < 1e-10,
            "thickness ratio {} should be sqrt(2)",
            t2 / t1
        );

        let coex_hot = coex_at(0.99);
        let t_hot = build_profile(&fp1, &coex_hot, 101, 1e-6)
            .unwrap()
            .thickness_10_90;
        assert!(t_hot > t1, "interface must thicken toward criticality");
    }

    #[test]
    fn tension_positive_branches_and_lambda_scaling() {
        let fp1 = reduced();
        let coex = coex_at(0.9);
        let t = surface_tension(&fp1, &coex).unwrap();
        assert!(t.branch_v > 0.0 && t.branch_l > 0.0);
        assert_eq!(t.h_static, t.branch_v + t.branch_l);
        assert!(t.h_static > 0.0);

        let mut fp2 = fp1;
        fp2.lambda = 2.0;
        let t2 = surface_tension(&fp2, &coex).unwrap();
        assert!(
            (t2.h_static / t.h_static - 2f64.sqrt()).abs() < 1e-10,
            "H ratio {} should be sqrt(2)",
            t2.h_static / t.h_static
        );
    }

    #[test]
    fn tension_profile_route_agrees() {
        // z-space evaluation of lambda (d rho/dz)^2 over the reconstructed
        // profile against the rho-space quadrature.
        let fp = reduced();
        let coex = coex_at(0.9);
        let t = surface_tension(&fp, &coex).unwrap();
        let profile = build_profile(&fp, &coex, 4001, 1e-6).unwrap();
        let mut h_z = 0.0;
        for j in 1..profile.len() {
            let f0 = fp.lambda * profile.drho_dz[j - 1] * profile.drho_dz[j - 1];
            let f1 = fp.lambda * profile.drho_dz[j] * profile.drho_dz[j];
            h_z += 0.5 * (f0 + f1) * (profile.z[j] - profile.z[j - 1]);
        }
        let rel = (h_z - t.h_static).abs() / t.h_static;
        assert!(rel < 1e-5, "H_z {h_z} vs H {} (rel {rel})", t.h_static);
    }

    #[test]
    fn partial_tension_limits_additivity_monotonicity() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let rho_i = 0.5 * (coex.rho_v + coex.rho_l);
        assert_eq!(
            partial_tension(&fp, coex.rho_v, Side::Vapour, &coex).unwrap(),
            0.0
        );
        assert_eq!(
            partial_tension(&fp, coex.rho_l, Side::Liquid, &coex).unwrap(),
            0.0
        );

        let t = surface_tension(&fp, &coex).unwrap();
        let hv = partial_tension(&fp, rho_i, Side::Vapour, &coex).unwrap();
        let hl = partial_tension(&fp, rho_i, Side::Liquid, &coex).unwrap();
        assert!(
            ((hv + hl) - t.h_static).abs() <= 1e-8 * t.h_static,
            "additivity: {} vs {}",
            hv + hl,
            t.h_static
        );

        let mut last = 0.0;
        for i in 1..=8 {
            let rho = coex.rho_v + (rho_i - coex.rho_v) * i as f64 / 8.0;
            let h = partial_tension(&fp, rho, Side::Vapour, &coex).unwrap();
            assert!(h > last, "running tension must increase");
            last = h;
        }

        assert!(partial_tension(&fp, coex.rho_l, Side::Vapour, &coex).is_err());
        assert!(partial_tension(&fp, coex.rho_v, Side::Liquid, &coex).is_err());
    }

    #[test]
    fn interior_residual_small_on_converged_profile() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let profile = build_profile(&fp, &coex, 2001, 1e-6).unwrap();
        let res = interior_residual(&fp, &profile).unwrap();
        assert_eq!(res.len(), profile.len() - 2);

        let mu_v = fp.chemical_potential_raw(coex.rho_v, coex.temp);
        let scale = profile
            .rho
            .iter()
            .map(|&r| (fp.chemical_potential_raw(r, coex.temp) - mu_v).abs())
            .fold(0.0f64, f64::max);
        let max_res = res.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
        assert!(
            max_res < 1e-4 * scale,
            "max residual {max_res} vs scale {scale}"
        );
    }

    #[test]
    fn interior_residual_second_order_convergence() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let max_res = |n: usize| {
            let profile = build_profile(&fp, &coex, n, 1e-6).unwrap();
            interior_residual(&fp, &profile)
                .unwrap()
                .iter()
                .fold(0.0f64, |acc, r| acc.max(r.abs()))
        };
        let coarse = max_res(1001);
        let fine = max_res(2001);
        let ratio = coarse / fine;
        assert!(
            (2.5..6.0).contains(&ratio),
            "expected ~4x improvement, got {ratio} ({coarse} -> {fine})"
        );
    }

    #[test]
    fn interior_residual_vanishes_toward_bulk() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let profile = build_profile(&fp, &coex, 2001, 1e-6).unwrap();
        let res = interior_residual(&fp, &profile).unwrap();
        let max_res = res.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
        // Both sides of the balance die out in the tails.
        assert!(res[0].abs() < 0.1 * max_res);
        assert!(res[res.len() - 1].abs() < 0.1 * max_res);
    }

    #[test]
    fn interior_residual_needs_five_samples() {
        let fp = reduced();
        let coex = coex_at(0.9);
        let mut profile = build_profile(&fp, &coex, 17, 1e-6).unwrap();
        profile.z.truncate(4);
        profile.rho.truncate(4);
        profile.drho_dz.truncate(4);
        assert!(matches!(
            interior_residual(&fp, &profile),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
