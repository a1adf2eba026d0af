use thiserror::Error;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("network has an lstm layer; a recurrent state is required")]
    MissingRecurrentState,

    #[error("network has no lstm layer; no recurrent state may be passed")]
    UnexpectedRecurrentState,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("batch must contain at least one sample")]
    EmptyBatch,

    #[error("finite-difference epsilon {0} outside [1e-7, 1e-3]")]
    InvalidEpsilon(f64),

    #[error("malformed parameter file: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
