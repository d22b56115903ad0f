use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by how a caller should react: bad input, an
/// exhausted search/iteration budget, or a numerical solver that failed to
/// reach its residual target. The CLI maps these groups onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A combinatorial search ran out of nodes before reaching a decision.
    #[error("undecided within budget: {0}")]
    Undecided(String),

    /// The transform orbit did not repeat within the step budget. Carries the
    /// canonical serializations of the families visited so far.
    #[error("no cycle within {steps} steps")]
    CycleBudgetExhausted {
        steps: usize,
        partial_orbit: Vec<String>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
