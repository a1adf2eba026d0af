use spectrum_env::{missed_opportunities, Environment, OccupancyVector, RadarAction};

use crate::agent::{Agent, Phase};
use crate::error::AgentError;

/// Per-epoch aggregates over exactly `steps_per_epoch` decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub mean_reward: f64,
    pub collisions: u64,
    pub missed_opportunities: u64,
    pub subbands_used: u64,
    pub adaptations: u64,
}

/// Everything the online phase produced: per-epoch stats plus the raw
/// action/occupancy streams for detection and sharing analysis.
#[derive(Debug, Clone)]
pub struct EvalLog {
    pub stats: Vec<EpochStats>,
    pub actions: Vec<RadarAction>,
    pub truth_occupancy: Vec<OccupancyVector>,
}

struct EpochAccumulator {
    reward_sum: f64,
    collisions: u64,
    missed: u64,
    subbands: u64,
    adaptations: u64,
    steps: usize,
}

impl EpochAccumulator {
    fn new() -> Self {
        Self { reward_sum: 0.0, collisions: 0, missed: 0, subbands: 0, adaptations: 0, steps: 0 }
    }

    fn finish(self, epoch: usize) -> EpochStats {
        EpochStats {
            epoch,
            mean_reward: self.reward_sum / self.steps.max(1) as f64,
            collisions: self.collisions,
            missed_opportunities: self.missed,
            subbands_used: self.subbands,
            adaptations: self.adaptations,
        }
    }
}

fn run_phase(
    agent: &mut Agent,
    env: &mut Environment,
    phase: Phase,
    epochs: usize,
    log_streams: bool,
) -> Result<EvalLog, AgentError> {
    let steps_per_epoch = agent.config().steps_per_epoch;
    let mut stats = Vec::with_capacity(epochs);
    let mut actions_log = Vec::new();
    let mut occupancy_log = Vec::new();
    let mut prev_action: Option<RadarAction> = None;

    for epoch in 0..epochs {
        let mut acc = EpochAccumulator::new();
        for _ in 0..steps_per_epoch {
            let state = env.state();
            let action = agent.select_action(&state, phase)?;
            let (transition, breakdown) = env.step(action.clone())?;
            let truth = env.last_truth_occupancy().clone();

            acc.reward_sum += breakdown.total;
            acc.collisions += breakdown.n_collisions as u64;
            acc.missed += missed_opportunities(&action, &truth)? as u64;
            acc.subbands += breakdown.n_subbands_used as u64;
            if prev_action.as_ref().is_some_and(|p| *p != action) {
                acc.adaptations += 1;
            }
            prev_action = Some(action.clone());

            agent.observe(&transition);
            agent.train_tick(phase)?;

            if log_streams {
                actions_log.push(action);
                occupancy_log.push(truth);
            }
            acc.steps += 1;
        }
        stats.push(acc.finish(epoch));
    }
    Ok(EvalLog { stats, actions: actions_log, truth_occupancy: occupancy_log })
}

/// Offline learning phase: uniform-random simulated decisions, experience
/// stored, deep agents updating every `n_online` decisions, and the
/// tabular agent solving its model at the end. Algorithms that do not
/// train (SAA, random) skip the phase entirely.
pub fn offline_train(
    agent: &mut Agent,
    env: &mut Environment,
) -> Result<Vec<EpochStats>, AgentError> {
    if !agent.algorithm().trains_offline() {
        return Ok(Vec::new());
    }
    env.warm_up()?;
    let epochs = agent.config().offline_epochs;
    let log = run_phase(agent, env, Phase::Offline, epochs, false)?;
    if let Some(unvisited) = agent.finish_offline(env.config())? {
        if unvisited > 0 {
            eprintln!(
                "note: policy iteration left {unvisited} states on the default full-band action"
            );
        }
    }
    Ok(log.stats)
}

/// Online phase: greedy operation on the learned behavior, with deep
/// agents continuing to update every `n_online` decisions when online
/// learning is enabled. Returns the stats plus raw streams.
pub fn online_evaluate(
    agent: &mut Agent,
    env: &mut Environment,
) -> Result<EvalLog, AgentError> {
    env.warm_up()?;
    let epochs = agent.config().online_epochs;
    run_phase(agent, env, Phase::Online, epochs, true)
}
