use thiserror::Error;

/// Errors raised by the geometric operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A precondition of the operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The per-frequency linear system of the L² decomposition could not be solved.
    #[error("singular mode system at frequency ({k1}, {k2})")]
    SingularMode { k1: i64, k2: i64 },
    /// An iterative method stopped before reaching its tolerance.
    #[error("{what} did not converge (residual {residual:.3e})")]
    NonConvergence { what: &'static str, residual: f64 },
    /// The request is outside what the implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed text input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(GeomError::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(GeomError::Contract(msg.into()))
}
