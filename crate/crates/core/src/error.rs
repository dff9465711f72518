use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum DriftError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A linear system was singular or too ill-conditioned to meet the
    /// residual contract. `pivot_ratio` is min |pivot| / max |pivot|.
    #[error("numerical failure: {reason} (pivot ratio {pivot_ratio:.3e})")]
    NumericalFailure { reason: String, pivot_ratio: f64 },

    #[error("no convergence after {iterations} iterations (last residual {last_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        last_residual: f64,
        /// Per-iteration eigenvalue estimates, when the caller tracks them.
        history: Vec<f64>,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DriftError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DriftError::InvalidArgument(msg.into()))
}
