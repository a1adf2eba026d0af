use serde::{Deserialize, Serialize};

use crate::error::EnvError;
use crate::state::count_states;

/// Static parameters of the spectrum MDP.
///
/// Reward constants follow the sign convention of the reward function:
/// `collision_penalty` and `adaptation_penalty` are negative, so the
/// penalty terms are `collision_penalty * n_collisions` and a flat
/// `adaptation_penalty` once `adaptation_limit` is reached.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    /// Number of sub-bands N the shared spectrum is split into.
    pub n_subbands: usize,
    /// History depth M: how many past occupancy vectors form a state.
    pub history_depth: usize,
    /// Total shared bandwidth in Hz.
    pub total_bandwidth: f64,
    /// Sensing threshold P0 in dB relative to the noise floor.
    pub sense_threshold_p0: f64,
    /// Std-dev in dB of per-band Gaussian power jitter applied before
    /// thresholding. Zero keeps sensing noiseless.
    pub sense_jitter_db: f64,
    /// Reward per collided sub-band (negative).
    pub collision_penalty: f64,
    /// Reward per used sub-band beyond the first, collision-free case.
    pub bandwidth_reward_unit: f64,
    /// Flat reward once the per-CPI adaptation count reaches the limit (negative).
    pub adaptation_penalty: f64,
    /// Adaptation count at which the penalty kicks in.
    pub adaptation_limit: usize,
    /// Decisions per CPI; the adaptation counter resets on this boundary.
    pub cpi_pulses: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            n_subbands: 5,
            history_depth: 2,
            total_bandwidth: 100e6,
            sense_threshold_p0: 0.0,
            sense_jitter_db: 0.0,
            collision_penalty: -45.0,
            bandwidth_reward_unit: 10.0,
            adaptation_penalty: -20.0,
            adaptation_limit: 20,
            cpi_pulses: 1000,
        }
    }
}

impl EnvConfig {
    /// Checks every invariant, including that the state space fits the
    /// platform index type.
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.n_subbands == 0 {
            return Err(EnvError::InvalidConfig("n_subbands must be >= 1".into()));
        }
        if self.history_depth == 0 {
            return Err(EnvError::InvalidConfig("history_depth must be >= 1".into()));
        }
        if self.adaptation_limit == 0 {
            return Err(EnvError::InvalidConfig("adaptation_limit must be >= 1".into()));
        }
        if self.cpi_pulses == 0 {
            return Err(EnvError::InvalidConfig("cpi_pulses must be >= 1".into()));
        }
        if !(self.total_bandwidth > 0.0) {
            return Err(EnvError::InvalidConfig("total_bandwidth must be positive".into()));
        }
        if self.sense_jitter_db < 0.0 {
            return Err(EnvError::InvalidConfig("sense_jitter_db must be >= 0".into()));
        }
        // Rejects 2^(M*N) overflow.
        count_states(self.n_subbands, self.history_depth)?;
        Ok(())
    }

    /// Bandwidth of one sub-band in Hz.
    pub fn subband_bandwidth(&self) -> f64 {
        self.total_bandwidth / self.n_subbands as f64
    }
}
