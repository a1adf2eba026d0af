use std::collections::VecDeque;

use rand::Rng;

use spectrum_env::Transition;

/// Fixed-capacity FIFO bank of transitions sampled uniformly for SGD.
#[derive(Debug, Clone)]
pub struct ReplayMemory {
    capacity: usize,
    ring: VecDeque<Transition>,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        Self { capacity, ring: VecDeque::with_capacity(capacity) }
    }

    pub fn push(&mut self, transition: Transition) {
        if self.ring.len() == self.capacity {
            self.ring.pop_front();
        }
        self.ring.push_back(transition);
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.ring.iter()
    }

    /// Uniform sample without replacement within one batch. Returns None
    /// (not ready) when fewer than `batch_size` transitions are stored.
    pub fn sample_batch<R: Rng>(&self, batch_size: usize, rng: &mut R) -> Option<Vec<&Transition>> {
        if self.ring.len() < batch_size {
            return None;
        }
        let mut indices: Vec<usize> = (0..self.ring.len()).collect();
        // Partial Fisher-Yates: only the first batch_size slots are needed.
        for i in 0..batch_size {
            let j = rng.random_range(i..indices.len());
            indices.swap(i, j);
        }
        Some(indices[..batch_size].iter().map(|&i| &self.ring[i]).collect())
    }
}

/// Transition storage grouped into fixed-length episodes for recurrent
/// replay: consecutive, non-overlapping windows of the decision stream.
#[derive(Debug, Clone)]
pub struct EpisodeMemory {
    episode_length: usize,
    capacity_episodes: usize,
    complete: VecDeque<Vec<Transition>>,
    current: Vec<Transition>,
}

impl EpisodeMemory {
    pub fn new(episode_length: usize, capacity_episodes: usize) -> Self {
        Self {
            episode_length,
            capacity_episodes,
            complete: VecDeque::with_capacity(capacity_episodes),
            current: Vec::with_capacity(episode_length),
        }
    }

    pub fn push(&mut self, transition: Transition) {
        self.current.push(transition);
        if self.current.len() == self.episode_length {
            if self.complete.len() == self.capacity_episodes {
                self.complete.pop_front();
            }
            let episode = std::mem::replace(
                &mut self.current,
                Vec::with_capacity(self.episode_length),
            );
            self.complete.push_back(episode);
        }
    }

    pub fn episode_length(&self) -> usize {
        self.episode_length
    }

    pub fn len(&self) -> usize {
        self.complete.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complete.is_empty()
    }

    /// Uniformly random stored episode, in temporal order. None until the
    /// first full episode exists.
    pub fn sample_episode<R: Rng>(&self, rng: &mut R) -> Option<&[Transition]> {
        if self.complete.is_empty() {
            return None;
        }
        let idx = rng.random_range(0..self.complete.len());
        Some(self.complete[idx].as_slice())
    }
}
