use thiserror::Error;

/// Errors raised by the collision-model library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mathematically undefined request (support violation, degenerate closed form, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix that should be a density matrix is not one.
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("non-unique steady state: {0}")]
    NonUniqueSteadyState(String),

    #[error("fixed-point iteration did not converge within {steps} steps (residual {residual:e})")]
    NotConverged { steps: usize, residual: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::InvalidState(_)
                | Error::NonUniqueSteadyState(_)
                | Error::NotConverged { .. }
                | Error::Internal(_)
        )
    }
}
