//! Shared numerical kernels: adaptive Gauss-Kronrod quadrature and a
//! safeguarded bisection/secant root finder.
//!
//! Both are deterministic: identical inputs produce bit-identical outputs.
//! Subdivision order is a fixed depth-first left-to-right walk and no state
//! survives between calls.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Nested fixed-order rule used on each panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRule {
    GaussKronrod15,
    GaussKronrod21,
}

/// Controls for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance, in (0, 1e-2].
    pub rel_tol: f64,
    /// Absolute floor below which the relative criterion is not pushed.
    pub abs_tol: f64,
    /// Maximum bisection depth, at most 60.
    pub max_depth: u32,
    pub node_rule: NodeRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-300,
            max_depth: 48,
            node_rule: NodeRule::GaussKronrod21,
        }
    }
}

impl QuadratureSpec {
    /// Default spec with a different relative tolerance.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::OutOfRange {
                what: "rel_tol",
                value: self.rel_tol,
                lo: f64::MIN_POSITIVE,
                hi: 1e-2,
            });
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter {
                what: "abs_tol",
                value: self.abs_tol,
            });
        }
        if self.max_depth > 60 {
            return Err(Error::OutOfRange {
                what: "max_depth",
                value: self.max_depth as f64,
                lo: 0.0,
                hi: 60.0,
            });
        }
        Ok(())
    }
}

/// Value and error bound returned by [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

// Standard QUADPACK 15-point Kronrod extension of 7-point Gauss.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG15: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Standard QUADPACK 21-point Kronrod extension of 10-point Gauss.
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG21: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// QUADPACK error rescaling: sharpens the raw |K - G| difference using the
/// integral of |f - mean| so smooth panels are not over-refined.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = math::abs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = math::powf(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One Gauss-Kronrod panel; returns the Kronrod value and an error bound.
fn kronrod_panel<F>(f: &F, a: f64, b: f64, xgk: &[f64], wg: &[f64], wgk: &[f64]) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 16];
    let mut fv2 = [0.0f64; 16];

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * wgk[n - 1];
    let mut res_abs = math::abs(res_kronrod);

    if n % 2 == 0 {
        res_gauss = f_center * wg[n / 2 - 1];
    }

    // Odd Kronrod indices coincide with the embedded Gauss nodes.
    for (j, wgauss) in wg.iter().enumerate().take((n - 1) / 2) {
        let jtw = j * 2 + 1;
        let dx = half * xgk[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += *wgauss * (f1 + f2);
        res_kronrod += wgk[jtw] * (f1 + f2);
        res_abs += wgk[jtw] * (math::abs(f1) + math::abs(f2));
    }
    for j in 0..(n / 2) {
        let jtw = j * 2;
        let dx = half * xgk[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_kronrod += wgk[jtw] * (f1 + f2);
        res_abs += wgk[jtw] * (math::abs(f1) + math::abs(f2));
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = wgk[n - 1] * math::abs(f_center - mean);
    for j in 0..(n - 1) {
        res_asc += wgk[j] * (math::abs(fv1[j] - mean) + math::abs(fv2[j] - mean));
    }

    let err = (res_kronrod - res_gauss) * half;
    let value = res_kronrod * half;
    let abs_half = math::abs(half);
    (
        value,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    )
}

/// Adaptive quadrature of `f` over `[a, b]`.
///
/// Panels whose error bound exceeds their share of the tolerance are
/// bisected, depth-first and left-to-right, so the result does not depend on
/// evaluation order. On success `error_estimate <= rel_tol * |value| +
/// abs_tol`; if the depth limit is hit the best estimate is carried in the
/// error value.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a < b) {
        return Err(Error::OutOfRange {
            what: "integration interval (requires a < b)",
            value: b - a,
            lo: f64::MIN_POSITIVE,
            hi: f64::INFINITY,
        });
    }

    let (xgk, wg, wgk): (&[f64], &[f64], &[f64]) = match spec.node_rule {
        NodeRule::GaussKronrod15 => (&XGK15, &WG15, &WGK15),
        NodeRule::GaussKronrod21 => (&XGK21, &WG21, &WGK21),
    };

    struct Panel {
        lo: f64,
        hi: f64,
        value: f64,
        error: f64,
        depth: u32,
    }

    let (whole, whole_err) = kronrod_panel(&f, a, b, xgk, wg, wgk);
    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    panels.push(Panel {
        lo: a,
        hi: b,
        value: whole,
        error: whole_err,
        depth: 0,
    });
    let mut value = whole;
    let mut err_sum = whole_err;

    // Globally adaptive: always bisect the panel with the largest error
    // bound. Ties resolve to the leftmost panel, which keeps the walk
    // deterministic. The panel cap catches integrands whose point noise sits
    // above the requested tolerance, where subdivision cannot help.
    const MAX_PANELS: usize = 16_384;
    loop {
        if err_sum <= f64::max(spec.abs_tol, spec.rel_tol * math::abs(value)) {
            return Ok(Quadrature {
                value,
                error_estimate: err_sum,
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureDepthExceeded {
                estimate: value,
                error: err_sum,
            });
        }
        let mut worst: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.depth >= spec.max_depth {
                continue;
            }
            let mid = 0.5 * (p.lo + p.hi);
            if !(mid > p.lo && mid < p.hi) {
                continue;
            }
            if worst.is_none_or(|w| p.error > panels[w].error) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else {
            return Err(Error::QuadratureDepthExceeded {
                estimate: value,
                error: err_sum,
            });
        };

        let Panel {
            lo,
            hi,
            value: v_old,
            error: e_old,
            depth,
        } = panels[i];
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod_panel(&f, lo, mid, xgk, wg, wgk);
        let (v2, e2) = kronrod_panel(&f, mid, hi, xgk, wg, wgk);
        value += v1 + v2 - v_old;
        err_sum += e1 + e2 - e_old;
        panels[i] = Panel {
            lo,
            hi: mid,
            value: v1,
            error: e1,
            depth: depth + 1,
        };
        panels.push(Panel {
            lo: mid,
            hi,
            value: v2,
            error: e2,
            depth: depth + 1,
        });

        // Periodically resum to shed accumulated cancellation.
        if panels.len() % 512 == 0 {
            value = panels.iter().map(|p| p.value).sum();
            err_sum = panels.iter().map(|p| p.error).sum();
        }
    }
}

/// Root of `f` inside a sign-change bracket.
///
/// Alternates secant and bisection steps, keeping the bracket valid at every
/// iteration. Stops when `|f| <= tol` or the bracket shrinks to a few ulps,
/// whichever comes first. A root sitting exactly on a bracket endpoint is
/// returned immediately.
pub fn find_root<F>(f: F, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo * f_hi > 0.0 {
        return Err(Error::InvalidBracket { f_lo, f_hi });
    }

    let mut best = if math::abs(f_lo) < math::abs(f_hi) {
        lo
    } else {
        hi
    };
    for iter in 0..200u32 {
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * f64::max(math::abs(lo), math::abs(hi)) {
            return Ok(best);
        }
        // Even iterations: secant through the bracket endpoints, clamped to
        // the interior. Odd iterations: plain bisection, which guarantees the
        // bracket keeps shrinking.
        let mut x = if iter % 2 == 0 && f_hi != f_lo {
            lo - f_lo * width / (f_hi - f_lo)
        } else {
            lo + 0.5 * width
        };
        if !(x > lo && x < hi) {
            x = lo + 0.5 * width;
        }
        if !(x > lo && x < hi) {
            return Ok(best);
        }
        let fx = f(x);
        if fx == 0.0 || math::abs(fx) <= tol {
            return Ok(x);
        }
        if fx * f_lo < 0.0 {
            hi = x;
            f_hi = fx;
        } else {
            lo = x;
            f_lo = fx;
        }
        best = if math::abs(f_lo) < math::abs(f_hi) {
            lo
        } else {
            hi
        };
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_exactness() {
        // Kronrod-15 integrates degree <= 22 exactly; the adaptive driver
        // must preserve that.
        let spec = QuadratureSpec {
            node_rule: NodeRule::GaussKronrod15,
            ..QuadratureSpec::default()
        };
        let q = integrate(|x| x * x, 0.0, 1.0, &spec).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-12, "got {}", q.value);

        let q = integrate(|x| x.powi(10) - 3.0 * x.powi(3), -1.0, 2.0, &spec).unwrap();
        let exact = (2f64.powi(11) + 1.0) / 11.0 - 3.0 * (16.0 - 1.0) / 4.0;
        assert!((q.value - exact).abs() <= 1e-13 * exact.abs());
    }

    #[test]
    fn endpoint_derivative_blowup() {
        // sqrt(x(1-x)) is finite but has infinite endpoint slope, the same
        // shape as the tension integrand.
        let q = integrate(
            |x| (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(
            (q.value - PI / 8.0).abs() < 1e-9 * (PI / 8.0),
            "got {} expected {}",
            q.value,
            PI / 8.0
        );
    }

    #[test]
    fn both_rules_agree() {
        for rule in [NodeRule::GaussKronrod15, NodeRule::GaussKronrod21] {
            let spec = QuadratureSpec {
                node_rule: rule,
                ..QuadratureSpec::default()
            };
            let q = integrate(|x| (-x).exp(), 0.0, 3.0, &spec).unwrap();
            let exact = 1.0 - (-3.0f64).exp();
            assert!((q.value - exact).abs() < 1e-12, "{rule:?}: {}", q.value);
        }
    }

    #[test]
    fn deterministic_repeat() {
        let run = || {
            integrate(
                |x| (x * (1.0 - x)).sqrt(),
                0.0,
                1.0,
                &QuadratureSpec::default(),
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn depth_limit_reports_best_estimate() {
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_depth: 2,
            node_rule: NodeRule::GaussKronrod15,
        };
        match integrate(|x| x.abs().sqrt().recip().min(1e8), -1.0, 1.0, &spec) {
            Err(Error::QuadratureDepthExceeded { estimate, .. }) => {
                assert!(estimate.is_finite());
            }
            other => panic!("expected depth error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_interval_rejected() {
        assert!(integrate(|x| x, 1.0, 1.0, &QuadratureSpec::default()).is_err());
        assert!(integrate(|x| x, 2.0, 1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn root_sqrt_two() {
        let root = find_root(|x| x * x - 2.0, (1.0, 2.0), 0.0).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-14, "got {root}");
    }

    #[test]
    fn root_at_endpoint() {
        let root = find_root(|x| x - 1.0, (1.0, 2.0), 1e-12).unwrap();
        assert_eq!(root, 1.0);
        let root = find_root(|x| x - 2.0, (1.0, 2.0), 1e-12).unwrap();
        assert_eq!(root, 2.0);
    }

    #[test]
    fn root_invalid_bracket() {
        assert!(matches!(
            find_root(|x| x * x + 1.0, (0.0, 1.0), 1e-12),
            Err(Error::InvalidBracket { .. })
        ));
    }
}
