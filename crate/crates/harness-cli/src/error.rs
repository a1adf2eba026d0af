use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("streams misaligned: {0}")]
    Misaligned(String),

    #[error("config file error: {0}")]
    ConfigFile(String),

    #[error(transparent)]
    Env(#[from] spectrum_env::EnvError),

    #[error(transparent)]
    Agent(#[from] agents::AgentError),

    #[error(transparent)]
    Dsp(#[from] radar_dsp::DspError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
