use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use neural_core::{NetworkSpec, QNetwork, QNetworkParams, RecurrentState, SgdConfig};
use spectrum_env::{
    action_count, count_states, enumerate_actions, EnvConfig, InterferenceState, RadarAction,
    Transition,
};
use tabular_rl::{estimate_model, policy_iteration, Policy, Sample, SolveConfig};

use crate::config::{AgentConfig, Algorithm};
use crate::error::AgentError;
use crate::replay::{EpisodeMemory, ReplayMemory};
use crate::saa::saa_action;
use crate::targets::{argmax, ddqn_target, dqn_target};

/// Which protocol phase a decision belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Simulated uniform-random exploration; nothing is transmitted.
    Offline,
    /// Live operation on the learned behavior.
    Online,
}

enum Memory {
    Flat(ReplayMemory),
    Episodic(EpisodeMemory),
}

struct DeepAgent {
    variant: Algorithm,
    online: QNetwork,
    target: QNetwork,
    memory: Memory,
    updates: u64,
    decisions_since_update: usize,
    /// Recurrent state carried across consecutive online decisions (DRQN).
    act_rec: Option<RecurrentState>,
}

struct TabularAgent {
    log: Vec<Sample>,
    policy: Option<Policy>,
    default_action: usize,
}

enum Kind {
    Deep(Box<DeepAgent>),
    Tabular(TabularAgent),
    Saa,
    Random,
}

/// A waveform-selection agent: selects actions, stores experience, and
/// updates its decision rule according to its algorithm.
pub struct Agent {
    cfg: AgentConfig,
    actions: Vec<RadarAction>,
    rng: ChaCha8Rng,
    kind: Kind,
}

impl Agent {
    pub fn new(cfg: AgentConfig, env_cfg: &EnvConfig, seed: u64) -> Result<Self, AgentError> {
        cfg.validate()?;
        env_cfg.validate()?;
        let actions = enumerate_actions(env_cfg.n_subbands)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_actions = actions.len();
        let input_dim = env_cfg.n_subbands * env_cfg.history_depth;

        let kind = match cfg.algorithm {
            Algorithm::Saa => Kind::Saa,
            Algorithm::Random => Kind::Random,
            Algorithm::PolicyIteration => Kind::Tabular(TabularAgent {
                log: Vec::new(),
                policy: None,
                default_action: RadarAction::full_band(env_cfg.n_subbands).index(),
            }),
            deep => {
                let spec = match deep {
                    Algorithm::Drqn => NetworkSpec::recurrent(
                        input_dim,
                        cfg.hidden_width,
                        cfg.hidden_width,
                        n_actions,
                    ),
                    _ => NetworkSpec::mlp(
                        input_dim,
                        &[cfg.hidden_width, cfg.hidden_width],
                        n_actions,
                    ),
                };
                let online = QNetwork::init(spec, rng.next_u64())?;
                let target = online.clone();
                let memory = if deep == Algorithm::Drqn {
                    let capacity = (cfg.replay_capacity / cfg.episode_length).max(1);
                    Memory::Episodic(EpisodeMemory::new(cfg.episode_length, capacity))
                } else {
                    Memory::Flat(ReplayMemory::new(cfg.replay_capacity))
                };
                let act_rec = online.initial_recurrent_state();
                Kind::Deep(Box::new(DeepAgent {
                    variant: deep,
                    online,
                    target,
                    memory,
                    updates: 0,
                    decisions_since_update: 0,
                    act_rec,
                }))
            }
        };
        Ok(Self { cfg, actions, rng, kind })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.cfg
    }

    pub fn algorithm(&self) -> Algorithm {
        self.cfg.algorithm
    }

    pub fn actions(&self) -> &[RadarAction] {
        &self.actions
    }

    /// Picks the next transmission. Offline decisions are uniform random
    /// for every algorithm; online decisions are greedy (epsilon-greedy
    /// while a deep agent keeps learning).
    pub fn select_action(
        &mut self,
        state: &InterferenceState,
        phase: Phase,
    ) -> Result<RadarAction, AgentError> {
        let n = self.actions.len();
        if phase == Phase::Offline {
            let idx = self.rng.random_range(0..n);
            return Ok(self.actions[idx].clone());
        }
        match &mut self.kind {
            Kind::Saa => Ok(saa_action(state.newest())),
            Kind::Random => {
                let idx = self.rng.random_range(0..n);
                Ok(self.actions[idx].clone())
            }
            Kind::Tabular(t) => {
                let idx = match &t.policy {
                    Some(policy) => policy.action(state.index()),
                    None => t.default_action,
                };
                Ok(self.actions[idx].clone())
            }
            Kind::Deep(d) => {
                let bits = state.input_bits();
                let (q, rec_next) = d.online.forward(&bits, d.act_rec.as_ref())?;
                if d.variant == Algorithm::Drqn {
                    // The acting state tracks the observed stream whether or
                    // not the step explores.
                    d.act_rec = rec_next;
                }
                let epsilon =
                    if self.cfg.online_learning { self.cfg.epsilon_online } else { 0.0 };
                let idx = if epsilon > 0.0 && self.rng.random::<f64>() < epsilon {
                    self.rng.random_range(0..n)
                } else {
                    argmax(&q)
                };
                Ok(self.actions[idx].clone())
            }
        }
    }

    /// Greedy q-values for a state, without advancing any recurrent state.
    /// Test hook for inspecting what a deep agent would pick.
    pub fn q_values(&self, state: &InterferenceState) -> Result<Option<Vec<f64>>, AgentError> {
        match &self.kind {
            Kind::Deep(d) => {
                let rec = d.online.initial_recurrent_state();
                let (q, _) = d.online.forward(&state.input_bits(), rec.as_ref())?;
                Ok(Some(q))
            }
            _ => Ok(None),
        }
    }

    /// Stores an observed transition in the agent's memory.
    pub fn observe(&mut self, transition: &Transition) {
        match &mut self.kind {
            Kind::Deep(d) => match &mut d.memory {
                Memory::Flat(replay) => replay.push(transition.clone()),
                Memory::Episodic(episodes) => episodes.push(transition.clone()),
            },
            Kind::Tabular(t) => t.log.push(Sample::from_transition(transition)),
            Kind::Saa | Kind::Random => {}
        }
    }

    /// Advances the update schedule by one decision; deep agents run one
    /// SGD minibatch per `n_online` decisions. Online updates only happen
    /// while `online_learning` is set; tabular and baseline agents never
    /// update here.
    pub fn train_tick(&mut self, phase: Phase) -> Result<(), AgentError> {
        if phase == Phase::Online && !self.cfg.online_learning {
            return Ok(());
        }
        let Kind::Deep(d) = &mut self.kind else { return Ok(()) };
        d.decisions_since_update += 1;
        if d.decisions_since_update < self.cfg.n_online {
            return Ok(());
        }
        d.decisions_since_update = 0;
        d.update(&self.cfg, &mut self.rng)
    }

    /// Ends the offline phase: the tabular agent fits its model and solves
    /// for the greedy policy, deep agents reset their acting recurrent
    /// state. Returns the number of states left on the default action (the
    /// tabular fallback), if any.
    pub fn finish_offline(&mut self, env_cfg: &EnvConfig) -> Result<Option<usize>, AgentError> {
        match &mut self.kind {
            Kind::Tabular(t) => {
                let n_states = count_states(env_cfg.n_subbands, env_cfg.history_depth)?;
                let n_actions = action_count(env_cfg.n_subbands);
                let (gamma_model, reward_model) =
                    estimate_model(&t.log, n_states, n_actions)?;
                let solve = SolveConfig {
                    gamma: self.cfg.gamma,
                    tol: 1e-9,
                    max_iters: 1000,
                    default_action: t.default_action,
                };
                let result = policy_iteration(&gamma_model, &reward_model, &solve)?;
                let unvisited = result.policy.unvisited_states();
                t.policy = Some(result.policy);
                Ok(Some(unvisited))
            }
            Kind::Deep(d) => {
                d.act_rec = d.online.initial_recurrent_state();
                Ok(None)
            }
            _ => Ok(None),
        }
    }

    /// The learned tabular policy, once solved.
    pub fn policy(&self) -> Option<&Policy> {
        match &self.kind {
            Kind::Tabular(t) => t.policy.as_ref(),
            _ => None,
        }
    }

    /// Transitions currently held in flat replay, oldest first.
    pub fn replay_rewards(&self) -> Option<Vec<f64>> {
        match &self.kind {
            Kind::Deep(d) => match &d.memory {
                Memory::Flat(replay) => Some(replay.iter().map(|t| t.reward).collect()),
                Memory::Episodic(_) => None,
            },
            _ => None,
        }
    }

    /// Snapshot of the online network's parameters (deep agents).
    pub fn network_params(&self) -> Option<&QNetworkParams> {
        match &self.kind {
            Kind::Deep(d) => Some(d.online.params()),
            _ => None,
        }
    }

    pub fn sgd_updates(&self) -> u64 {
        match &self.kind {
            Kind::Deep(d) => d.updates,
            _ => 0,
        }
    }
}

impl DeepAgent {
    fn sgd_config(cfg: &AgentConfig) -> SgdConfig {
        SgdConfig {
            learning_rate: cfg.learning_rate,
            batch_size: cfg.batch_size,
            grad_clip: cfg.grad_clip,
        }
    }

    fn update(&mut self, cfg: &AgentConfig, rng: &mut ChaCha8Rng) -> Result<(), AgentError> {
        match &self.memory {
            Memory::Flat(replay) => {
                let Some(batch) = replay.sample_batch(cfg.batch_size, rng) else {
                    return Ok(());
                };
                let mut inputs = Vec::with_capacity(batch.len());
                let mut actions = Vec::with_capacity(batch.len());
                let mut targets = Vec::with_capacity(batch.len());
                for t in batch {
                    let next_bits = t.next_state.input_bits();
                    let y = match self.variant {
                        Algorithm::Ddqn => ddqn_target(
                            t.reward,
                            &next_bits,
                            &self.online,
                            &self.target,
                            cfg.gamma,
                            None,
                            None,
                        )?,
                        _ => dqn_target(t.reward, &next_bits, &self.target, cfg.gamma, None)?,
                    };
                    inputs.push(t.state.input_bits());
                    actions.push(t.action.index());
                    targets.push(y);
                }
                let (_, grads) = self.online.backward(&inputs, &actions, &targets)?;
                self.online.sgd_step(&grads, &Self::sgd_config(cfg));
            }
            Memory::Episodic(episodes) => {
                if episodes.is_empty() {
                    return Ok(());
                }
                let mut accumulated: Option<QNetworkParams> = None;
                for _ in 0..cfg.episodes_per_update {
                    let episode = episodes.sample_episode(rng).expect("nonempty");
                    // Replay the target network forward in time: prime it
                    // with the episode's first state, then value each
                    // successor with the carried hidden state.
                    let mut rec = self.target.initial_recurrent_state();
                    let first_bits = episode[0].state.input_bits();
                    let (_, next_rec) = self.target.forward(&first_bits, rec.as_ref())?;
                    rec = next_rec;
                    let mut inputs = Vec::with_capacity(episode.len());
                    let mut actions = Vec::with_capacity(episode.len());
                    let mut targets = Vec::with_capacity(episode.len());
                    for t in episode {
                        let next_bits = t.next_state.input_bits();
                        let (q_next, next_rec) =
                            self.target.forward(&next_bits, rec.as_ref())?;
                        rec = next_rec;
                        let max_q = q_next.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        inputs.push(t.state.input_bits());
                        actions.push(t.action.index());
                        targets.push(t.reward + cfg.gamma * max_q);
                    }
                    let (_, grads) = self.online.backward(&inputs, &actions, &targets)?;
                    match &mut accumulated {
                        None => accumulated = Some(grads),
                        Some(acc) => acc.axpy(1.0, &grads),
                    }
                }
                if let Some(mut grads) = accumulated {
                    grads.scale(1.0 / cfg.episodes_per_update as f64);
                    self.online.sgd_step(&grads, &Self::sgd_config(cfg));
                }
            }
        }
        self.updates += 1;
        if self.updates % cfg.target_update_period as u64 == 0 {
            self.target = self.online.clone();
        }
        Ok(())
    }
}
