use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{count_collisions, RadarAction};
use crate::config::EnvConfig;
use crate::error::EnvError;
use crate::occupancy::OccupancyVector;
use crate::reward::{compute_reward, RewardBreakdown};
use crate::sense::{sense, synth_powers_db};
use crate::source::{advance_interference, InterferenceSource};
use crate::state::{encode_state, InterferenceState};

/// One observed (s, a, r, s') tuple; the unit of experience replay.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: InterferenceState,
    pub action: RadarAction,
    pub reward: f64,
    pub next_state: InterferenceState,
}

/// The spectrum MDP as a stepped state machine.
///
/// Each decision: the interferer advances one step, the radar's action is
/// scored against the occupancy concurrent with that transmission, and
/// the sensed occupancy is shifted into the M-deep history. The sensed
/// state available for the *next* decision therefore reflects the step
/// just completed, so a source that toggles between sensing and
/// transmission produces collisions.
#[derive(Debug, Clone)]
pub struct Environment {
    cfg: EnvConfig,
    source: InterferenceSource,
    history: VecDeque<OccupancyVector>,
    t: usize,
    decisions: usize,
    prev_action: Option<RadarAction>,
    n_adaptations: usize,
    last_truth: OccupancyVector,
    last_sensed: OccupancyVector,
    rng: ChaCha8Rng,
}

impl Environment {
    pub fn new(cfg: EnvConfig, source: InterferenceSource, seed: u64) -> Result<Self, EnvError> {
        cfg.validate()?;
        source.validate(cfg.n_subbands)?;
        let history: VecDeque<OccupancyVector> =
            (0..cfg.history_depth).map(|_| OccupancyVector::zeros(cfg.n_subbands)).collect();
        let zeros = OccupancyVector::zeros(cfg.n_subbands);
        Ok(Self {
            cfg,
            source,
            history,
            t: 0,
            decisions: 0,
            prev_action: None,
            n_adaptations: 0,
            last_truth: zeros.clone(),
            last_sensed: zeros,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    /// Passive sensing period: fills the history with the source's first
    /// M occupancies without transmitting.
    pub fn warm_up(&mut self) -> Result<(), EnvError> {
        for _ in 0..self.cfg.history_depth {
            let truth = advance_interference(&self.source, self.t, self.cfg.n_subbands)?;
            let sensed = self.sense_truth(&truth)?;
            self.history.pop_front();
            self.history.push_back(sensed.clone());
            self.last_truth = truth;
            self.last_sensed = sensed;
            self.t += 1;
        }
        Ok(())
    }

    /// State the radar would act on right now.
    pub fn state(&self) -> InterferenceState {
        let history: Vec<OccupancyVector> = self.history.iter().cloned().collect();
        encode_state(&history).expect("history dimensions are maintained internally")
    }

    /// True occupancy concurrent with the most recent transmission.
    pub fn last_truth_occupancy(&self) -> &OccupancyVector {
        &self.last_truth
    }

    /// Thresholded (possibly jittered) version of the same.
    pub fn last_sensed_occupancy(&self) -> &OccupancyVector {
        &self.last_sensed
    }

    /// Steps completed, counting warm-up.
    pub fn time(&self) -> usize {
        self.t
    }

    /// Transmissions scored so far.
    pub fn decisions(&self) -> usize {
        self.decisions
    }

    /// Transmits `action` for one PRI and scores it.
    pub fn step(&mut self, action: RadarAction) -> Result<(Transition, RewardBreakdown), EnvError> {
        if action.n_subbands() != self.cfg.n_subbands {
            return Err(EnvError::DimensionMismatch {
                expected: self.cfg.n_subbands,
                got: action.n_subbands(),
            });
        }
        // The adaptation counter resets on each CPI boundary, and a change
        // across the boundary is not a change within the new CPI.
        if self.decisions % self.cfg.cpi_pulses == 0 {
            self.n_adaptations = 0;
            self.prev_action = None;
        }
        if let Some(prev) = &self.prev_action {
            if *prev != action {
                self.n_adaptations += 1;
            }
        }

        let state = self.state();
        let truth = advance_interference(&self.source, self.t, self.cfg.n_subbands)?;
        let n_collisions = count_collisions(&action, &truth)?;
        let breakdown =
            compute_reward(n_collisions, action.width(), self.n_adaptations, &self.cfg)?;

        let sensed = self.sense_truth(&truth)?;
        self.history.pop_front();
        self.history.push_back(sensed.clone());
        let next_state = self.state();

        self.last_truth = truth;
        self.last_sensed = sensed;
        self.prev_action = Some(action.clone());
        self.t += 1;
        self.decisions += 1;

        let transition = Transition { state, action, reward: breakdown.total, next_state };
        Ok((transition, breakdown))
    }

    fn sense_truth(&mut self, truth: &OccupancyVector) -> Result<OccupancyVector, EnvError> {
        let powers = synth_powers_db(
            truth,
            self.cfg.sense_threshold_p0,
            self.cfg.sense_jitter_db,
            &mut self.rng,
        );
        sense(&powers, self.cfg.n_subbands, self.cfg.sense_threshold_p0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tdd_env() -> Environment {
        let source =
            InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 0 };
        Environment::new(EnvConfig::default(), source, 0).unwrap()
    }

    #[test]
    fn full_band_into_silence_scores_forty() {
        // Phase picked so the source is off at t = 0.
        let source =
            InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 3 };
        let mut env = Environment::new(EnvConfig::default(), source, 0).unwrap();
        let (_, breakdown) = env.step(RadarAction::full_band(5)).unwrap();
        assert_eq!(breakdown.total, 40.0);
    }

    #[test]
    fn full_band_into_tdd_collides_twice() {
        let mut env = tdd_env();
        let (_, breakdown) = env.step(RadarAction::full_band(5)).unwrap();
        assert_eq!(breakdown.n_collisions, 2);
        assert_eq!(breakdown.total, -90.0);
    }

    #[test]
    fn constant_actions_never_adapt() {
        let mut env = tdd_env();
        let action = RadarAction::new(3, 4, 5).unwrap();
        for _ in 0..env.config().cpi_pulses.min(50) {
            let (_, b) = env.step(action.clone()).unwrap();
            assert_eq!(b.n_adaptations_in_cpi, 0);
        }
    }

    #[test]
    fn adaptation_counter_resets_each_cpi() {
        let cfg = EnvConfig { cpi_pulses: 4, adaptation_limit: 2, ..EnvConfig::default() };
        let source = InterferenceSource::Fdd { bands: vec![] };
        let mut env = Environment::new(cfg, source, 0).unwrap();
        let a = RadarAction::new(0, 0, 5).unwrap();
        let b = RadarAction::new(1, 1, 5).unwrap();
        // Alternate every step: adaptations climb within a CPI, reset after.
        let mut seen = Vec::new();
        for i in 0..8 {
            let action = if i % 2 == 0 { a.clone() } else { b.clone() };
            let (_, bd) = env.step(action).unwrap();
            seen.push(bd.n_adaptations_in_cpi);
        }
        assert_eq!(seen, vec![0, 1, 2, 3, 0, 1, 2, 3]);
    }

    #[test]
    fn transition_chains_states() {
        let mut env = tdd_env();
        env.warm_up().unwrap();
        let a = RadarAction::full_band(5);
        let (t1, _) = env.step(a.clone()).unwrap();
        let (t2, _) = env.step(a).unwrap();
        assert_eq!(t1.next_state, t2.state);
    }

    #[test]
    fn warm_up_fills_history_from_source() {
        let mut env = tdd_env();
        env.warm_up().unwrap();
        // Steps 0 and 1 are both on-phase: history is [01100, 01100].
        let state = env.state();
        assert_eq!(state.history()[0].to_string(), "01100");
        assert_eq!(state.history()[1].to_string(), "01100");
        assert_eq!(env.time(), 2);
    }

    #[test]
    fn reward_uses_transmission_step_occupancy() {
        // Source off at sensing time (t=4 after warm-up at phase 0 covers
        // t=0..1); transmit at t=2 hits the on phase.
        let mut env = tdd_env();
        env.warm_up().unwrap();
        let (t, breakdown) = env.step(RadarAction::full_band(5)).unwrap();
        // t = 2 is still within the on window.
        assert_eq!(breakdown.n_collisions, 2);
        assert_eq!(t.next_state.newest().to_string(), "01100");
    }
}
