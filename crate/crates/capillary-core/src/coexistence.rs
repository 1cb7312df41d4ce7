//! Two-phase equilibrium (binodal) and the integral invariant that
//! generalizes the Maxwell equal-area rule.
//!
//! At coexistence the vapour and liquid bulks share the pressure and the
//! chemical potential. The same equality, rewritten as
//! `integral of P/rho^2 d(rho) = P_v/rho_v - P_l/rho_l`, stays meaningful for
//! unequal bulk pressures and is exposed as [`maxwell_residual`].

use crate::eos::FluidParams;
use crate::error::{Error, Result};
use crate::math;
use crate::numerics;

/// A solved two-phase equilibrium at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexistenceState {
    pub temp: f64,
    /// Vapour bulk density (the smallest root of `P(rho) = p0`).
    pub rho_v: f64,
    /// Liquid bulk density (the largest root).
    pub rho_l: f64,
    /// Common bulk pressure.
    pub p0: f64,
    /// Spinodal bracket `(rho_s_low, rho_s_high)` strictly inside the binodal.
    pub spinodal: (f64, f64),
}

impl CoexistenceState {
    /// Re-checks ordering, bulk pressure agreement and the equal-area
    /// residual. Downstream profile construction rejects states that fail.
    pub fn validate(&self, fp: &FluidParams) -> Result<()> {
        let crit = fp.critical();
        let (s_lo, s_hi) = self.spinodal;
        if !(self.rho_v < s_lo && s_lo < s_hi && s_hi < self.rho_l) {
            return Err(Error::OutOfRange {
                what: "coexistence densities (rho_v < spinodal < rho_l)",
                value: self.rho_v,
                lo: 0.0,
                hi: self.rho_l,
            });
        }
        let tol_p = 1e-10 * crit.pressure;
        for rho in [self.rho_v, self.rho_l] {
            let p = fp.pressure_raw(rho, self.temp);
            if math::abs(p - self.p0) > tol_p {
                return Err(Error::InvalidParameter {
                    what: "bulk pressure mismatch against p0",
                    value: p - self.p0,
                });
            }
        }
        let residual = maxwell_residual(
            fp, self.rho_v, self.rho_l, self.p0, self.p0, self.temp,
        )?;
        // The residual has units of pressure/density; its natural scale is
        // P_c/rho_c, which is 1 in reduced units.
        if math::abs(residual) > 1e-10 * crit.pressure / crit.rho {
            return Err(Error::InvalidParameter {
                what: "equal-area residual",
                value: residual,
            });
        }
        Ok(())
    }
}

/// Equal-area (generalized Maxwell) residual
/// `integral_{rho_v}^{rho_l} P/rho^2 d(rho) - (p_v/rho_v - p_l/rho_l)`,
/// evaluated in closed form through the free energy:
/// `alpha(rho_l) - alpha(rho_v) - p_v/rho_v + p_l/rho_l`.
///
/// `p_v` and `p_l` may differ; the invariant applies to any motion that
/// keeps the density surfaces material, not only to equilibrium.
pub fn maxwell_residual(
    fp: &FluidParams,
    rho_v: f64,
    rho_l: f64,
    p_v: f64,
    p_l: f64,
    temp: f64,
) -> Result<f64> {
    for rho in [rho_v, rho_l] {
        if !(rho > 0.0 && rho < fp.max_density()) {
            return Err(Error::CovolumeBound {
                rho,
                max_rho: fp.max_density(),
            });
        }
    }
    if rho_v > rho_l {
        return Err(Error::OutOfRange {
            what: "rho_v (must not exceed rho_l)",
            value: rho_v,
            lo: 0.0,
            hi: rho_l,
        });
    }
    if !(temp > 0.0) {
        return Err(Error::InvalidParameter {
            what: "temp",
            value: temp,
        });
    }
    Ok(fp.alpha_raw(rho_l, temp) - fp.alpha_raw(rho_v, temp) - p_v / rho_v + p_l / rho_l)
}

/// Solves the binodal at `temp`: equal pressure and equal chemical potential
/// in the two bulks.
///
/// A damped two-variable Newton iteration on `(rho_v, rho_l)` runs first,
/// seeded outside the spinodal bracket; the damping factor is halved until an
/// iterate stays on the stable side of its spinodal root, where the pressure
/// is monotone and the Jacobian nonsingular. If Newton stalls, a bisection on
/// the coexistence pressure takes over (the chemical-potential mismatch is
/// strictly decreasing in the candidate pressure), followed by a final Newton
/// polish.
pub fn maxwell_construction(fp: &FluidParams, temp: f64) -> Result<CoexistenceState> {
    let crit = fp.critical();
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
    let spinodal = fp.spinodal(temp)?;
    let (s_lo, s_hi) = spinodal;
    let max_rho = fp.max_density();

    let tol_p = 1e-12 * crit.pressure;
    let mu_c = fp.chemical_potential_raw(crit.rho, crit.temp);
    let tol_mu = 1e-12 * math::abs(mu_c);

    let mut rho_v = 0.5 * s_lo;
    let mut rho_l = 0.5 * (s_hi + max_rho);

    match newton_two_phase(fp, temp, &mut rho_v, &mut rho_l, spinodal, tol_p, tol_mu) {
        Ok(()) => {}
        Err(_) => {
            // Stalled: bracket the coexistence pressure between the spinodal
            // extrema and bisect on the chemical-potential mismatch.
            let (v, l) = pressure_bisection(fp, temp, spinodal)?;
            rho_v = v;
            rho_l = l;
            newton_two_phase(fp, temp, &mut rho_v, &mut rho_l, spinodal, tol_p, tol_mu)
                .map_err(|_| Error::ConvergenceFailure {
                    rho_v,
                    rho_l,
                    iterations: 100,
                })?;
        }
    }

    let p_v = fp.pressure_raw(rho_v, temp);
    let p_l = fp.pressure_raw(rho_l, temp);
    let state = CoexistenceState {
        temp,
        rho_v,
        rho_l,
        p0: 0.5 * (p_v + p_l),
        spinodal,
    };
    state.validate(fp)?;
    Ok(state)
}

fn newton_two_phase(
    fp: &FluidParams,
    temp: f64,
    rho_v: &mut f64,
    rho_l: &mut f64,
    (s_lo, s_hi): (f64, f64),
    tol_p: f64,
    tol_mu: f64,
) -> core::result::Result<(), ()> {
    let max_rho = fp.max_density();
    for _ in 0..100 {
        let f_p = fp.pressure_raw(*rho_v, temp) - fp.pressure_raw(*rho_l, temp);
        let f_mu =
            fp.chemical_potential_raw(*rho_v, temp) - fp.chemical_potential_raw(*rho_l, temp);
        if math::abs(f_p) < tol_p && math::abs(f_mu) < tol_mu {
            return Ok(());
        }

        let dp_v = fp.dpressure_drho_raw(*rho_v, temp);
        let dp_l = fp.dpressure_drho_raw(*rho_l, temp);
        // J = [[dp_v, -dp_l], [dp_v/rho_v, -dp_l/rho_l]]
        let det = dp_v * dp_l * (1.0 / *rho_v - 1.0 / *rho_l);
        if det == 0.0 || !det.is_finite() {
            return Err(());
        }
        let step_v = (f_p * dp_l / *rho_l - dp_l * f_mu) / det;
        let step_l = (f_p * dp_v / *rho_v - dp_v * f_mu) / det;

        let mut gamma = 1.0;
        loop {
            let cand_v = *rho_v + gamma * step_v;
            let cand_l = *rho_l + gamma * step_l;
            if cand_v > 0.0 && cand_v < s_lo && cand_l > s_hi && cand_l < max_rho {
                *rho_v = cand_v;
                *rho_l = cand_l;
                break;
            }
            gamma *= 0.5;
            if gamma < 1e-15 {
                return Err(());
            }
        }
    }
    Err(())
}

/// Pressure-space bisection: for a candidate `p0` the vapour and liquid roots
/// of `P(rho) = p0` are unique on the monotone branches, and
/// `mu(rho_l) - mu(rho_v)` decreases strictly with `p0`.
fn pressure_bisection(
    fp: &FluidParams,
    temp: f64,
    (s_lo, s_hi): (f64, f64),
) -> Result<(f64, f64)> {
    let max_rho = fp.max_density();
    let p_max = fp.pressure_raw(s_lo, temp);
    let p_floor = f64::max(fp.pressure_raw(s_hi, temp), 0.0);
    let lo_p = p_floor + 1e-12 * (p_max - p_floor);
    let hi_p = p_max - 1e-12 * (p_max - p_floor);
    if !(lo_p < hi_p) {
        return Err(Error::ConvergenceFailure {
            rho_v: s_lo,
            rho_l: s_hi,
            iterations: 0,
        });
    }

    let roots_at = |p0: f64| -> Result<(f64, f64)> {
        let v = numerics::find_root(
            |rho| fp.pressure_raw(rho, temp) - p0,
            (max_rho * 1e-14, s_lo),
            0.0,
        )?;
        let l = numerics::find_root(
            |rho| fp.pressure_raw(rho, temp) - p0,
            (s_hi, max_rho * (1.0 - 1e-12)),
            0.0,
        )?;
        Ok((v, l))
    };

    let mut lo = lo_p;
    let mut hi = hi_p;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let (v, l) = roots_at(mid)?;
        let g = fp.chemical_potential_raw(l, temp) - fp.chemical_potential_raw(v, temp);
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    roots_at(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadratureSpec;
    use proptest::prelude::*;

    fn reduced() -> FluidParams {
        FluidParams::reduced(1.0)
    }

    #[test]
    fn binodal_satisfies_invariants_across_temperatures() {
        let fp = reduced();
        for temp in [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99] {
            let st = maxwell_construction(&fp, temp).unwrap();
            st.validate(&fp)
                .unwrap_or_else(|e| panic!("T = {temp}: {e}"));
            let (s_lo, s_hi) = st.spinodal;
            assert!(
                st.rho_v < s_lo && s_hi < st.rho_l,
                "T = {temp}: spinodal not strictly inside binodal"
            );
        }
    }

    #[test]
    fn density_gap_shrinks_toward_critical() {
        let fp = reduced();
        let mut last_gap = f64::INFINITY;
        for temp in [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99] {
            let st = maxwell_construction(&fp, temp).unwrap();
            let gap = st.rho_l - st.rho_v;
            assert!(gap < last_gap, "gap must shrink with T, T = {temp}");
            last_gap = gap;
        }
        assert!(last_gap < 0.5, "gap at T = 0.99 should be small: {last_gap}");
    }

    #[test]
    fn critical_and_above_rejected() {
        let fp = reduced();
        for temp in [1.0, 1.2] {
            assert!(matches!(
                maxwell_construction(&fp, temp),
                Err(Error::Supercritical { .. })
            ));
        }
    }

    #[test]
    fn residual_vanishes_at_equilibrium() {
        let fp = reduced();
        let st = maxwell_construction(&fp, 0.9).unwrap();
        let r = maxwell_residual(&fp, st.rho_v, st.rho_l, st.p0, st.p0, st.temp).unwrap();
        assert!(r.abs() < 1e-10, "residual {r}");
    }

    #[test]
    fn residual_degenerate_interval() {
        // Empty integral: only the bulk terms survive.
        let fp = reduced();
        let r = maxwell_residual(&fp, 1.2, 1.2, 0.5, 0.7, 0.9).unwrap();
        assert_eq!(r, -0.5 / 1.2 + 0.7 / 1.2);
    }

    #[test]
    fn residual_perturbed_state_matches_quadrature() {
        let fp = reduced();
        let st = maxwell_construction(&fp, 0.9).unwrap();
        let rho_l = st.rho_l + 0.01;
        let closed = maxwell_residual(&fp, st.rho_v, rho_l, st.p0, st.p0, st.temp).unwrap();
        assert!(closed.abs() > 1e-6, "perturbation must show: {closed}");

        let q = numerics::integrate(
            |rho| fp.pressure_raw(rho, st.temp) / (rho * rho),
            st.rho_v,
            rho_l,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let by_quadrature = q.value - st.p0 / st.rho_v + st.p0 / rho_l;
        assert!(
            (closed - by_quadrature).abs() <= 1e-10 * closed.abs().max(1.0),
            "closed {closed} vs quadrature {by_quadrature}"
        );
    }

    #[test]
    fn fallback_agrees_with_newton() {
        let fp = reduced();
        for temp in [0.6, 0.9] {
            let st = maxwell_construction(&fp, temp).unwrap();
            let (v, l) = pressure_bisection(&fp, temp, st.spinodal).unwrap();
            assert!((v - st.rho_v).abs() <= 1e-9 * st.rho_v, "T={temp}");
            assert!((l - st.rho_l).abs() <= 1e-9 * st.rho_l, "T={temp}");
        }
    }

    proptest! {
        // Closed form versus adaptive quadrature of P/rho^2 on arbitrary
        // subcritical intervals.
        #[test]
        fn residual_two_routes_agree(
            lo in 0.05f64..1.4,
            width in 0.05f64..1.4,
            temp in 0.4f64..1.2,
            p_v in 0.0f64..1.5,
            p_l in 0.0f64..1.5,
        ) {
            let fp = reduced();
            let hi = (lo + width).min(2.9);
            prop_assume!(hi > lo + 1e-3);
            let closed = maxwell_residual(&fp, lo, hi, p_v, p_l, temp).unwrap();
            let q = numerics::integrate(
                |rho| fp.pressure_raw(rho, temp) / (rho * rho),
                lo,
                hi,
                &QuadratureSpec::default(),
            )
            .unwrap();
            let by_quadrature = q.value - p_v / lo + p_l / hi;
            let scale = closed.abs().max(1.0);
            prop_assert!(
                (closed - by_quadrature).abs() <= 1e-10 * scale,
                "closed {} vs quadrature {}", closed, by_quadrature
            );
        }
    }
}
