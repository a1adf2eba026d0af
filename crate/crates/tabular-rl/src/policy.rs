use std::io::Write;

use crate::error::TabularError;
use crate::model::{RewardModel, TransitionModel};

/// A deterministic state-to-action mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    action_of: Vec<usize>,
    /// Whether the state had any visited action when the policy was built;
    /// unvisited states fall back to the configured default action.
    visited: Vec<bool>,
    n_actions: usize,
}

impl Policy {
    pub fn uniform_default(n_states: usize, n_actions: usize, default_action: usize) -> Self {
        Self { action_of: vec![default_action; n_states], visited: vec![false; n_states], n_actions }
    }

    pub fn action(&self, state: usize) -> usize {
        self.action_of[state]
    }

    pub fn n_states(&self) -> usize {
        self.action_of.len()
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn was_visited(&self, state: usize) -> bool {
        self.visited[state]
    }

    /// States that fell back to the default action.
    pub fn unvisited_states(&self) -> usize {
        self.visited.iter().filter(|&&v| !v).count()
    }

    /// Writes `state,action` rows with a header.
    pub fn export_csv<W: Write>(&self, mut w: W) -> Result<(), TabularError> {
        writeln!(w, "state,action")?;
        for (s, &a) in self.action_of.iter().enumerate() {
            writeln!(w, "{s},{a}")?;
        }
        Ok(())
    }
}

/// State values indexed densely.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction {
    v: Vec<f64>,
}

impl ValueFunction {
    pub fn zeros(n_states: usize) -> Self {
        Self { v: vec![0.0; n_states] }
    }

    pub fn value(&self, state: usize) -> f64 {
        self.v[state]
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn export_csv<W: Write>(&self, mut w: W) -> Result<(), TabularError> {
        writeln!(w, "state,value")?;
        for (s, val) in self.v.iter().enumerate() {
            writeln!(w, "{s},{val}")?;
        }
        Ok(())
    }
}

/// Knobs for the solvers.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub gamma: f64,
    pub tol: f64,
    pub max_iters: usize,
    /// Action assigned to states with no visited action.
    pub default_action: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { gamma: 0.9, tol: 1e-9, max_iters: 1000, default_action: 0 }
    }
}

fn check_gamma_tol(gamma: f64, tol: f64) -> Result<(), TabularError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(TabularError::InvalidConfig(format!("gamma {gamma} must lie in [0, 1)")));
    }
    if !(tol > 0.0) {
        return Err(TabularError::InvalidConfig(format!("tol {tol} must be positive")));
    }
    Ok(())
}

/// Expected one-step return of taking `action` in `state` under `v`.
fn q_value(
    gamma_model: &TransitionModel,
    rewards: &RewardModel,
    state: usize,
    action: usize,
    v: &[f64],
    gamma: f64,
) -> Option<f64> {
    let successors = gamma_model.successors(state, action)?;
    Some(
        successors
            .iter()
            .map(|&(s2, p)| p * (rewards.mean_reward(state, action, s2) + gamma * v[s2]))
            .sum(),
    )
}

/// Iterative Bellman backups for a fixed policy until the max-norm change
/// drops below `tol`. States whose on-policy action was never visited
/// keep value zero.
pub fn policy_evaluation(
    policy: &Policy,
    gamma_model: &TransitionModel,
    rewards: &RewardModel,
    gamma: f64,
    tol: f64,
) -> Result<ValueFunction, TabularError> {
    check_gamma_tol(gamma, tol)?;
    let n = gamma_model.n_states();
    let mut v = vec![0.0; n];
    // Geometric contraction; the cap only guards degenerate tolerances.
    let sweep_cap = 1_000_000;
    for _ in 0..sweep_cap {
        let mut delta: f64 = 0.0;
        let mut next = vec![0.0; n];
        for s in 0..n {
            let a = policy.action(s);
            next[s] = q_value(gamma_model, rewards, s, a, &v, gamma).unwrap_or(0.0);
            delta = delta.max((next[s] - v[s]).abs());
        }
        v = next;
        if delta < tol {
            break;
        }
    }
    Ok(ValueFunction { v })
}

/// Greedy one-step improvement over visited actions; ties break toward
/// the lowest action index, unvisited states take the default action.
pub fn policy_improvement(
    v: &ValueFunction,
    gamma_model: &TransitionModel,
    rewards: &RewardModel,
    gamma: f64,
    default_action: usize,
) -> Policy {
    let n = gamma_model.n_states();
    let mut action_of = vec![default_action; n];
    let mut visited = vec![false; n];
    for s in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for a in gamma_model.visited_actions(s) {
            let q = q_value(gamma_model, rewards, s, a, v.values(), gamma)
                .expect("action comes from visited set");
            // Strictly-greater keeps the lowest index on exact ties.
            if best.map_or(true, |(_, bq)| q > bq) {
                best = Some((a, q));
            }
        }
        if let Some((a, _)) = best {
            action_of[s] = a;
            visited[s] = true;
        }
    }
    Policy { action_of, visited, n_actions: gamma_model.n_actions() }
}

/// Outcome of a full policy-iteration solve.
#[derive(Debug, Clone)]
pub struct PolicyIterationResult {
    pub policy: Policy,
    pub values: ValueFunction,
    pub iterations: usize,
    pub converged: bool,
}

/// Alternates evaluation and improvement until the policy stops changing.
pub fn policy_iteration(
    gamma_model: &TransitionModel,
    rewards: &RewardModel,
    cfg: &SolveConfig,
) -> Result<PolicyIterationResult, TabularError> {
    check_gamma_tol(cfg.gamma, cfg.tol)?;
    if cfg.max_iters == 0 {
        return Err(TabularError::InvalidConfig("max_iters must be >= 1".into()));
    }
    let n = gamma_model.n_states();
    // Start greedy w.r.t. the zero value function so round one already
    // prefers observed rewards.
    let mut policy = policy_improvement(
        &ValueFunction::zeros(n),
        gamma_model,
        rewards,
        cfg.gamma,
        cfg.default_action,
    );
    let mut values = ValueFunction::zeros(n);
    for iteration in 1..=cfg.max_iters {
        values = policy_evaluation(&policy, gamma_model, rewards, cfg.gamma, cfg.tol)?;
        let improved =
            policy_improvement(&values, gamma_model, rewards, cfg.gamma, cfg.default_action);
        if improved == policy {
            return Ok(PolicyIterationResult { policy, values, iterations: iteration, converged: true });
        }
        policy = improved;
    }
    Ok(PolicyIterationResult { policy, values, iterations: cfg.max_iters, converged: false })
}

/// Independent fixed-point solver used to cross-check policy iteration.
/// Plain value iteration over visited actions.
pub fn value_iteration_oracle(
    gamma_model: &TransitionModel,
    rewards: &RewardModel,
    gamma: f64,
    tol: f64,
) -> Result<ValueFunction, TabularError> {
    check_gamma_tol(gamma, tol)?;
    let n = gamma_model.n_states();
    let mut v = vec![0.0; n];
    let sweep_cap = 1_000_000;
    for _ in 0..sweep_cap {
        let mut delta: f64 = 0.0;
        let mut next = vec![0.0; n];
        for s in 0..n {
            let best = gamma_model
                .visited_actions(s)
                .into_iter()
                .filter_map(|a| q_value(gamma_model, rewards, s, a, &v, gamma))
                .fold(None, |acc: Option<f64>, q| Some(acc.map_or(q, |m| m.max(q))));
            next[s] = best.unwrap_or(0.0);
            delta = delta.max((next[s] - v[s]).abs());
        }
        v = next;
        if delta < tol {
            break;
        }
    }
    Ok(ValueFunction { v })
}
