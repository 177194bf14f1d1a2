use thiserror::Error;

use crate::solvers::DomSetResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad ids, mixed family kinds, invalid ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Geometric input for which a predicate is undefined, e.g. two identical circles.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A covering instance with no solution (an edge with no elements).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The exact solver ran out of its node budget. Carries the best set found so far.
    #[error("search node limit of {limit} exceeded")]
    NodeLimit {
        limit: u64,
        incumbent: Option<Box<DomSetResult>>,
    },

    /// Instance exceeds a configured size cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("generation failed: {0}")]
    Generation(String),

    /// A post-condition check failed. Indicates a bug or non-pseudo-disk input.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
