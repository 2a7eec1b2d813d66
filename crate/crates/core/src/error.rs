use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the support or parameter space.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value that cannot be represented, e.g. a hazard whose survival
    /// denominator has underflowed to zero.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Conditioning on an event whose density is numerically zero.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// Caller asked for something that does not exist (bad component index, etc).
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed or unreadable input data.
    #[error("input error at {location}: {message}")]
    Input { location: String, message: String },

    /// A data row that cannot enter the likelihood.
    #[error("data error in row {row}: {message}")]
    Data { row: usize, message: String },

    #[error("did not converge after {iterations} iterations (|score|_inf = {score_norm:e}) at {iterate:?}")]
    NonConvergence {
        iterations: usize,
        score_norm: f64,
        iterate: [f64; 3],
    },

    /// Singular or non-finite linear algebra during an iterative solve.
    #[error("numeric failure: {message} at {iterate:?}")]
    Numeric { message: String, iterate: [f64; 3] },

    /// Quadrature could not reach its tolerance.
    #[error("accuracy target not met: estimate {estimate:e} with error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit status for command-line front ends.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input { .. } | Error::Data { .. } | Error::Usage(_) => 2,
            Error::Domain(_) | Error::Overflow(_) | Error::Conditioning(_) => 3,
            Error::NonConvergence { .. } | Error::Numeric { .. } => 4,
            Error::Accuracy { .. } => 5,
        }
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}

pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and >= 0, got {value}"
        )))
    }
}
