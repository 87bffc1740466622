use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the range the operation accepts.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A point lies outside the chart the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock cutoff is too small for the requested tail tolerance.
    #[error("truncation error: cutoff {cutoff} leaves tail mass above {tail_tol:e}; need cutoff >= {required}")]
    Truncation {
        cutoff: usize,
        required: usize,
        tail_tol: f64,
    },

    /// The invariant measure cannot be normalised for this Bargmann index.
    #[error("unsupported measure: Bargmann index K = {0} must exceed 1/2")]
    UnsupportedMeasure(f64),

    /// Input matrices fail a structural check (shape, hermiticity).
    #[error("validation error: {0}")]
    Validation(String),

    /// The thermal identification does not apply at this point.
    #[error("outside thermal model: {0}")]
    OutOfModel(String),

    /// `xi = 0` is the zero-temperature vacuum.
    #[error("zero-temperature limit at xi = 0")]
    ZeroTemperature,

    /// An iterative or integration routine failed.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
