use crate::config::EnvConfig;
use crate::error::EnvError;

/// Every term of one step's reward, kept separate for logging.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardBreakdown {
    /// N_c: sub-bands where radar and interferer overlapped.
    pub n_collisions: usize,
    /// N_SB: sub-bands the radar transmitted in.
    pub n_subbands_used: usize,
    /// N_WA: waveform adaptations so far in the current CPI.
    pub n_adaptations_in_cpi: usize,
    /// Collision / bandwidth term.
    pub r_plus: f64,
    /// Adaptation term.
    pub r_star: f64,
    /// r_plus + r_star.
    pub total: f64,
}

/// Scores one decision: a collision penalty of `collision_penalty * N_c`
/// when any collision occurred, otherwise a bandwidth reward of
/// `bandwidth_reward_unit * (N_SB - 1)`; plus a flat `adaptation_penalty`
/// once the CPI's adaptation count reaches the limit.
pub fn compute_reward(
    n_collisions: usize,
    n_subbands_used: usize,
    n_adaptations: usize,
    cfg: &EnvConfig,
) -> Result<RewardBreakdown, EnvError> {
    if n_subbands_used == 0 {
        return Err(EnvError::InvalidAction("the radar must use at least one sub-band".into()));
    }
    let r_plus = if n_collisions >= 1 {
        cfg.collision_penalty * n_collisions as f64
    } else {
        cfg.bandwidth_reward_unit * (n_subbands_used as f64 - 1.0)
    };
    let r_star = if n_adaptations >= cfg.adaptation_limit { cfg.adaptation_penalty } else { 0.0 };
    Ok(RewardBreakdown {
        n_collisions,
        n_subbands_used,
        n_adaptations_in_cpi: n_adaptations,
        r_plus,
        r_star,
        total: r_plus + r_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EnvConfig {
        EnvConfig::default()
    }

    #[test]
    fn collision_free_pays_per_band() {
        let r = compute_reward(0, 3, 0, &cfg()).unwrap();
        assert_eq!(r.r_plus, 20.0);
        assert_eq!(r.r_star, 0.0);
        assert_eq!(r.total, 20.0);
    }

    #[test]
    fn collisions_dominate_bandwidth() {
        let r = compute_reward(2, 5, 0, &cfg()).unwrap();
        assert_eq!(r.r_plus, -90.0);
        assert_eq!(r.total, -90.0);
    }

    #[test]
    fn adaptation_penalty_at_boundary() {
        let r = compute_reward(0, 1, 20, &cfg()).unwrap();
        assert_eq!(r.r_plus, 0.0);
        assert_eq!(r.r_star, -20.0);
        assert_eq!(r.total, -20.0);
        let below = compute_reward(0, 1, 19, &cfg()).unwrap();
        assert_eq!(below.r_star, 0.0);
    }

    #[test]
    fn zero_bands_is_invalid() {
        assert!(compute_reward(0, 0, 0, &cfg()).is_err());
    }

    #[test]
    fn total_is_sum_of_terms() {
        let r = compute_reward(1, 4, 25, &cfg()).unwrap();
        assert_eq!(r.total, r.r_plus + r.r_star);
        assert_eq!(r.total, -65.0);
    }
}
