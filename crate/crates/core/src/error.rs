use core::fmt;

/// Errors reported by the kernels in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The speed `c` was zero or negative.
    NonPositiveSpeed(f64),
    /// The switching intensity `lambda` was zero or negative.
    NonPositiveIntensity(f64),
    /// A named input was NaN or infinite.
    NonFinite { field: &'static str },
    /// A time argument was zero, negative or not finite.
    NonPositiveTime(f64),
    /// A special function was called outside its domain.
    Domain { function: &'static str, arg: f64 },
    /// A parameter takes one of the excluded values of a formula.
    InvalidParameter { what: &'static str, value: f64 },
    /// Only powers 1 to 4 of the inverse tangent have series here.
    UnsupportedPower(u32),
    /// A series still had a term above the tolerance when the budget ran out.
    TruncationNotConverged {
        series: &'static str,
        terms: usize,
        last_term: f64,
    },
    /// A radius at or beyond the ball of radius `ct`.
    RadiusOutsideBall { r: f64, radius: f64 },
    /// Adaptive quadrature ran out of subintervals.
    QuadratureNotConverged { estimate: f64, error: f64 },
    /// Invalid configuration value.
    InvalidConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveSpeed(c) => write!(f, "speed c must be positive, got {c}"),
            Error::NonPositiveIntensity(l) => {
                write!(f, "switching intensity lambda must be positive, got {l}")
            }
            Error::NonFinite { field } => write!(f, "{field} must be finite"),
            Error::NonPositiveTime(t) => write!(f, "time must be positive and finite, got {t}"),
            Error::Domain { function, arg } => {
                write!(f, "{function}: argument {arg} outside domain")
            }
            Error::InvalidParameter { what, value } => {
                write!(f, "invalid parameter {what} = {value}")
            }
            Error::UnsupportedPower(n) => {
                write!(f, "arctan power {n} not supported (expected 1..=4)")
            }
            Error::TruncationNotConverged {
                series,
                terms,
                last_term,
            } => write!(
                f,
                "{series}: not converged after {terms} terms (last term {last_term:e})"
            ),
            Error::RadiusOutsideBall { r, radius } => {
                write!(f, "radius {r} must lie in [0, {radius})")
            }
            Error::QuadratureNotConverged { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate}, error {error:e})"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
