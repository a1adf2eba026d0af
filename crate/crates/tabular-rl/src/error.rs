use thiserror::Error;

#[derive(Debug, Error)]
pub enum TabularError {
    /// Model estimation needs at least one transition.
    #[error("cannot estimate a model from zero transitions")]
    EmptyModel,

    /// The discount factor or tolerance is outside its legal range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A state or action index exceeds the declared space size.
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
