use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data is not a valid behavior, expression or realization.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A parameter lies outside the normalized range an operation accepts.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// No quantum violation above the local bound exists for these parameters.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
