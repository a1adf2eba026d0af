//! Tabular reinforcement learning for the spectrum MDP: frequentist
//! estimation of the transition and reward functions from logged
//! transitions, policy evaluation / improvement, full policy iteration,
//! and an independent value-iteration oracle used by the test suites.

pub mod error;
pub mod model;
pub mod policy;

pub use error::TabularError;
pub use model::{estimate_model, RewardModel, Sample, TransitionModel};
pub use policy::{
    policy_evaluation, policy_improvement, policy_iteration, value_iteration_oracle, Policy,
    PolicyIterationResult, SolveConfig, ValueFunction,
};
