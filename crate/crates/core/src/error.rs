use core::fmt;

/// Errors raised by the numeric engine and the growth computations.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Error {
    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    NonConvergence {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    /// An argument was outside the domain of the operation.
    Domain(&'static str),
    /// `N_μ` diverges because the profile carries mass at the origin.
    DivergentIntegral,
    /// `S(ρ)` and the type bounds need a non-integer order.
    IntegerOrder { rho: f64 },
    /// The requested circle passes through an atom of the measure.
    SingularCircle { r: f64 },
    /// An integral over an unbounded range did not produce a finite value.
    DivergentTail,
    /// A measure failed validation (atom index, reason).
    InvalidMeasure { index: usize, reason: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence {
                estimate,
                error_estimate,
                subdivisions,
            } => write!(
                f,
                "quadrature did not converge after {subdivisions} subdivisions \
                 (estimate {estimate}, error estimate {error_estimate})"
            ),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::DivergentIntegral => {
                write!(f, "averaged counting integral diverges: mass at the origin")
            }
            Error::IntegerOrder { rho } => {
                write!(f, "order {rho} is an integer; S(rho) diverges")
            }
            Error::SingularCircle { r } => {
                write!(f, "circle of radius {r} passes through an atom")
            }
            Error::DivergentTail => write!(f, "integral over an unbounded range diverges"),
            Error::InvalidMeasure { index, reason } => {
                write!(f, "invalid atom #{index}: {reason}")
            }
        }
    }
}

impl core::error::Error for Error {}
