use thiserror::Error;

#[derive(Debug, Error)]
pub enum DdopError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The strict pulse requires non-overlapping sub-pulses (2*Qt <= M).
    #[error("constraint violation: {0}")]
    Constraint(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DdopError>;
