//! Error type shared by every module of the crate.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Domain violations (inputs outside the model's validity range) are kept
/// separate from numerical failures (a solver or quadrature that did not
/// reach its tolerance) so callers can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Density at or beyond the covolume bound `1/b`, or non-positive.
    CovolumeBound { rho: f64, max_rho: f64 },
    /// Temperature at or above the critical temperature: no spinodal, no
    /// coexistence.
    Supercritical { temp: f64, t_c: f64 },
    /// A scalar argument landed outside its admissible interval.
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// A parameter failed a structural precondition (non-positive viscosity,
    /// zero curvature radius, ...).
    InvalidParameter { what: &'static str, value: f64 },
    /// The two-phase Newton iteration stalled; carries the last iterate.
    ConvergenceFailure {
        rho_v: f64,
        rho_l: f64,
        iterations: u32,
    },
    /// Adaptive quadrature hit its subdivision limit; carries the best
    /// estimate and its error bound.
    QuadratureDepthExceeded { estimate: f64, error: f64 },
    /// A root-finding bracket does not enclose a sign change.
    InvalidBracket { f_lo: f64, f_hi: f64 },
    /// Sampled arrays that must share a grid have different lengths.
    GridMismatch { expected: usize, got: usize },
    /// A sampled profile is too coarse for the requested operation.
    TooFewSamples { got: usize, need: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CovolumeBound { rho, max_rho } => write!(
                f,
                "density {rho} outside the open interval (0, {max_rho}) set by the covolume"
            ),
            Error::Supercritical { temp, t_c } => write!(
                f,
                "temperature {temp} is not below the critical temperature {t_c}; no coexistence"
            ),
            Error::OutOfRange {
                what,
                value,
                lo,
                hi,
            } => write!(f, "{what} = {value} outside [{lo}, {hi}]"),
            Error::InvalidParameter { what, value } => {
                write!(f, "invalid parameter {what} = {value}")
            }
            Error::ConvergenceFailure {
                rho_v,
                rho_l,
                iterations,
            } => write!(
                f,
                "two-phase solver stalled after {iterations} iterations at (rho_v, rho_l) = ({rho_v}, {rho_l})"
            ),
            Error::QuadratureDepthExceeded { estimate, error } => write!(
                f,
                "quadrature did not converge: best estimate {estimate} with error bound {error}"
            ),
            Error::InvalidBracket { f_lo, f_hi } => write!(
                f,
                "bracket endpoints do not straddle a root: f = ({f_lo}, {f_hi})"
            ),
            Error::GridMismatch { expected, got } => {
                write!(f, "profile arrays disagree in length: {expected} vs {got}")
            }
            Error::TooFewSamples { got, need } => {
                write!(f, "profile has {got} samples, need at least {need}")
            }
        }
    }
}

impl core::error::Error for Error {}
