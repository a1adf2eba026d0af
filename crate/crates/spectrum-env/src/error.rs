use thiserror::Error;

/// Errors produced by the spectrum environment.
#[derive(Debug, Error)]
pub enum EnvError {
    /// A configuration value is out of its legal range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A vector had the wrong number of sub-bands.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A state index does not address any state.
    #[error("state index {index} out of range (total {n_states} states)")]
    IndexOutOfRange { index: usize, n_states: usize },

    /// A non-wrapping trace ran past its last row.
    #[error("interference trace exhausted at step {0}")]
    TraceExhausted(usize),

    /// The action is not a legal radar transmission.
    #[error("invalid action: {0}")]
    InvalidAction(String),

    /// A trace file row could not be parsed.
    #[error("malformed trace row {line}: {reason}")]
    MalformedTrace { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
