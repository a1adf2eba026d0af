use serde::{Deserialize, Serialize};

use crate::error::AgentError;

/// Which decision-maker drives the radar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PolicyIteration,
    Dqn,
    Ddqn,
    Drqn,
    Saa,
    Random,
}

impl Algorithm {
    pub fn is_deep(self) -> bool {
        matches!(self, Self::Dqn | Self::Ddqn | Self::Drqn)
    }

    /// Whether the offline phase does anything for this algorithm.
    pub fn trains_offline(self) -> bool {
        matches!(self, Self::PolicyIteration | Self::Dqn | Self::Ddqn | Self::Drqn)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PolicyIteration => "policy_iteration",
            Self::Dqn => "dqn",
            Self::Ddqn => "ddqn",
            Self::Drqn => "drqn",
            Self::Saa => "saa",
            Self::Random => "random",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "policy_iteration" | "pi" => Ok(Self::PolicyIteration),
            "dqn" => Ok(Self::Dqn),
            "ddqn" => Ok(Self::Ddqn),
            "drqn" => Ok(Self::Drqn),
            "saa" => Ok(Self::Saa),
            "random" => Ok(Self::Random),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Training-protocol and learner hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub algorithm: Algorithm,
    /// Discount factor.
    pub gamma: f64,
    /// SGD updates between target-network refreshes.
    pub target_update_period: usize,
    /// Decisions between SGD updates, offline and online.
    pub n_online: usize,
    pub offline_epochs: usize,
    pub online_epochs: usize,
    pub steps_per_epoch: usize,
    pub replay_capacity: usize,
    /// DRQN episode length q.
    pub episode_length: usize,
    /// Episodes averaged per DRQN update.
    pub episodes_per_update: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub grad_clip: Option<f64>,
    /// Exploration rate while learning online; pure evaluation runs set 0.
    pub epsilon_online: f64,
    /// Whether deep agents keep updating during the online phase.
    pub online_learning: bool,
    /// Width of each hidden layer in the deep stacks.
    pub hidden_width: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Dqn,
            gamma: 0.9,
            target_update_period: 100,
            n_online: 10,
            offline_epochs: 200,
            online_epochs: 200,
            steps_per_epoch: 101,
            replay_capacity: 10_000,
            episode_length: 8,
            episodes_per_update: 4,
            batch_size: 32,
            learning_rate: 1e-3,
            grad_clip: None,
            epsilon_online: 0.05,
            online_learning: true,
            hidden_width: 64,
        }
    }
}

impl AgentConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self { algorithm, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(AgentError::InvalidConfig(format!(
                "gamma {} must lie in [0, 1)",
                self.gamma
            )));
        }
        for (name, v) in [
            ("target_update_period", self.target_update_period),
            ("n_online", self.n_online),
            ("steps_per_epoch", self.steps_per_epoch),
            ("replay_capacity", self.replay_capacity),
            ("episode_length", self.episode_length),
            ("episodes_per_update", self.episodes_per_update),
            ("batch_size", self.batch_size),
            ("hidden_width", self.hidden_width),
        ] {
            if v == 0 {
                return Err(AgentError::InvalidConfig(format!("{name} must be >= 1")));
            }
        }
        if !(self.learning_rate > 0.0) {
            return Err(AgentError::InvalidConfig("learning_rate must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.epsilon_online) {
            return Err(AgentError::InvalidConfig("epsilon_online must lie in [0, 1]".into()));
        }
        Ok(())
    }
}
