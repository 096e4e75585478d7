use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid factor order: {0}")]
    InvalidFactorOrder(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSelection(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unsupported spin j = {0} (only 1/2 and 1 are available)")]
    UnsupportedSpin(f64),

    #[error("rapidity must be non-negative, got {0}")]
    NegativeRapidity(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
