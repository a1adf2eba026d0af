use std::collections::BTreeMap;

use spectrum_env::Transition;

use crate::error::TabularError;

/// A logged transition reduced to dense indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
}

impl Sample {
    pub fn from_transition(t: &Transition) -> Self {
        Self {
            state: t.state.index(),
            action: t.action.index(),
            reward: t.reward,
            next_state: t.next_state.index(),
        }
    }
}

/// Frequentist estimate of the transition probability function: for each
/// visited (s, a), the empirical distribution over successor states.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    n_states: usize,
    n_actions: usize,
    // (s, a) -> successor -> visit count; BTreeMaps keep iteration deterministic.
    counts: BTreeMap<(usize, usize), BTreeMap<usize, u64>>,
}

impl TransitionModel {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    /// Γ(s, a, s'): zero when (s, a) was never visited.
    pub fn prob(&self, state: usize, action: usize, next_state: usize) -> f64 {
        let Some(successors) = self.counts.get(&(state, action)) else { return 0.0 };
        let total: u64 = successors.values().sum();
        let count = successors.get(&next_state).copied().unwrap_or(0);
        count as f64 / total as f64
    }

    /// Successor distribution of a visited (s, a), or None.
    pub fn successors(&self, state: usize, action: usize) -> Option<Vec<(usize, f64)>> {
        let successors = self.counts.get(&(state, action))?;
        let total: u64 = successors.values().sum();
        Some(successors.iter().map(|(&s2, &c)| (s2, c as f64 / total as f64)).collect())
    }

    /// Actions observed at least once in `state`, ascending.
    pub fn visited_actions(&self, state: usize) -> Vec<usize> {
        self.counts
            .range((state, 0)..=(state, self.n_actions.saturating_sub(1)))
            .map(|(&(_, a), _)| a)
            .collect()
    }

    pub fn visit_count(&self, state: usize, action: usize, next_state: usize) -> u64 {
        self.counts
            .get(&(state, action))
            .and_then(|m| m.get(&next_state).copied())
            .unwrap_or(0)
    }

    pub fn visited_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.keys().copied()
    }
}

/// Mean observed reward per (s, a, s') triple.
#[derive(Debug, Clone)]
pub struct RewardModel {
    sums: BTreeMap<(usize, usize, usize), (f64, u64)>,
}

impl RewardModel {
    /// R(s, a, s') as the arithmetic mean of all observations; zero when
    /// the triple was never observed.
    pub fn mean_reward(&self, state: usize, action: usize, next_state: usize) -> f64 {
        match self.sums.get(&(state, action, next_state)) {
            Some(&(sum, count)) => sum / count as f64,
            None => 0.0,
        }
    }

    pub fn observation_count(&self, state: usize, action: usize, next_state: usize) -> u64 {
        self.sums.get(&(state, action, next_state)).map(|&(_, c)| c).unwrap_or(0)
    }
}

/// Builds Γ and R from logged transitions by counting.
pub fn estimate_model(
    samples: &[Sample],
    n_states: usize,
    n_actions: usize,
) -> Result<(TransitionModel, RewardModel), TabularError> {
    if samples.is_empty() {
        return Err(TabularError::EmptyModel);
    }
    let mut counts: BTreeMap<(usize, usize), BTreeMap<usize, u64>> = BTreeMap::new();
    let mut sums: BTreeMap<(usize, usize, usize), (f64, u64)> = BTreeMap::new();
    for s in samples {
        if s.state >= n_states || s.next_state >= n_states {
            return Err(TabularError::IndexOutOfRange {
                index: s.state.max(s.next_state),
                limit: n_states,
            });
        }
        if s.action >= n_actions {
            return Err(TabularError::IndexOutOfRange { index: s.action, limit: n_actions });
        }
        *counts.entry((s.state, s.action)).or_default().entry(s.next_state).or_insert(0) += 1;
        let entry = sums.entry((s.state, s.action, s.next_state)).or_insert((0.0, 0));
        entry.0 += s.reward;
        entry.1 += 1;
    }
    Ok((TransitionModel { n_states, n_actions, counts }, RewardModel { sums }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(state: usize, action: usize, reward: f64, next_state: usize) -> Sample {
        Sample { state, action, reward, next_state }
    }

    #[test]
    fn deterministic_transitions_estimate_to_one() {
        let samples: Vec<Sample> = (0..10).map(|_| sample(0, 0, 1.0, 1)).collect();
        let (gamma, _) = estimate_model(&samples, 2, 1).unwrap();
        assert_eq!(gamma.prob(0, 0, 1), 1.0);
        assert_eq!(gamma.prob(0, 0, 0), 0.0);
    }

    #[test]
    fn frequencies_become_probabilities() {
        let mut samples = vec![sample(0, 0, 0.0, 1); 6];
        samples.extend(vec![sample(0, 0, 0.0, 2); 4]);
        let (gamma, _) = estimate_model(&samples, 3, 1).unwrap();
        assert!((gamma.prob(0, 0, 1) - 0.6).abs() < 1e-12);
        assert!((gamma.prob(0, 0, 2) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn rewards_average_arithmetically() {
        let samples = vec![sample(0, 0, 10.0, 1), sample(0, 0, 20.0, 1)];
        let (_, rewards) = estimate_model(&samples, 2, 1).unwrap();
        assert_eq!(rewards.mean_reward(0, 0, 1), 15.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(estimate_model(&[], 2, 1), Err(TabularError::EmptyModel)));
    }

    #[test]
    fn probabilities_normalise_per_pair() {
        let samples = vec![
            sample(0, 0, 0.0, 0),
            sample(0, 0, 0.0, 1),
            sample(0, 0, 0.0, 1),
            sample(1, 0, 0.0, 0),
        ];
        let (gamma, _) = estimate_model(&samples, 2, 1).unwrap();
        for (s, a) in gamma.visited_pairs().collect::<Vec<_>>() {
            let total: f64 =
                gamma.successors(s, a).unwrap().iter().map(|&(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unvisited_pairs_are_absent() {
        let samples = vec![sample(0, 0, 0.0, 1)];
        let (gamma, _) = estimate_model(&samples, 2, 2).unwrap();
        assert!(gamma.successors(0, 1).is_none());
        assert!(gamma.successors(1, 0).is_none());
        assert_eq!(gamma.visited_actions(0), vec![0]);
        assert!(gamma.visited_actions(1).is_empty());
    }
}
