use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("invalid agent config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Env(#[from] spectrum_env::EnvError),

    #[error(transparent)]
    Neural(#[from] neural_core::NeuralError),

    #[error(transparent)]
    Tabular(#[from] tabular_rl::TabularError),
}
