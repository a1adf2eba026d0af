use thiserror::Error;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("invalid radar config: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("target delay {delay_s} s does not fit in the PRI {pri_s} s")]
    DelayBeyondPri { delay_s: f64, pri_s: f64 },

    #[error(transparent)]
    Env(#[from] spectrum_env::EnvError),
}
