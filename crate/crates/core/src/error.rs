use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants map onto the exit codes used by the command-line front end:
/// input problems are validation failures, the numerical ones are
/// convergence failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("relative entropy diverges: {0}")]
    Divergence(String),

    #[error("stationary state is not unique: {0}")]
    AmbiguousStationary(String),

    #[error("fixed point is not unique: {0}")]
    NonUniqueFixedPoint(String),

    #[error("spectrum truncation failed: {0}")]
    Truncation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integrability check failed: {0}")]
    Integrability(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("time stepping did not converge: {0}")]
    Convergence(String),

    #[error("level crossing at t = {time}: gap {gap:e}")]
    Degeneracy { time: f64, gap: f64 },

    #[error("off-resonant exchanger setup: {0}")]
    OffResonance(String),
}

impl Error {
    /// True for failures caused by numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation(_)
                | Error::Quadrature(_)
                | Error::Convergence(_)
                | Error::AmbiguousStationary(_)
                | Error::NonUniqueFixedPoint(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
