//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the documented precondition of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Adaptive quadrature hit its subdivision limit before meeting the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e}")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    /// An integral that must be finite diverges.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// The requested problem exceeds the dense/exact size limits.
    #[error("problem too large: {0}")]
    TooLarge(String),

    /// A resolvent was requested on the spectrum of the operator.
    #[error("point lies on the spectrum: {0}")]
    OnSpectrum(String),

    /// The envelope or table does not cover the requested range.
    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    /// No bound state exists for the requested parameters.
    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// A parameter choice is outside the admissible set of a bound.
    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
