//! Decision-makers for the spectrum-sharing radar: deep Q-learning in
//! plain, double, and recurrent variants with experience replay and
//! frozen target networks; tabular policy iteration over the logged MDP;
//! a sense-and-avoid baseline; and the two-phase offline/online protocol
//! that trains and evaluates them.

pub mod agent;
pub mod config;
pub mod error;
pub mod protocol;
pub mod replay;
pub mod saa;
pub mod targets;

pub use agent::{Agent, Phase};
pub use config::{AgentConfig, Algorithm};
pub use error::AgentError;
pub use protocol::{offline_train, online_evaluate, EpochStats, EvalLog};
pub use replay::{EpisodeMemory, ReplayMemory};
pub use saa::saa_action;
pub use targets::{argmax, ddqn_target, dqn_target};
