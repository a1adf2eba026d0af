//! End-to-end training behavior on small environments: the tabular agent
//! recovers the obvious policy, deep agents reach near-oracle reward on a
//! static spectrum, and recurrent updates are order-sensitive.

use agents::{offline_train, online_evaluate, Agent, AgentConfig, Algorithm, Phase};
use spectrum_env::{
    compute_reward, count_collisions, encode_state, enumerate_actions, EnvConfig, Environment,
    InterferenceSource, OccupancyVector, RadarAction, Transition,
};

fn static_source() -> InterferenceSource {
    // Occupancy [0,0,0,1,1] every step.
    InterferenceSource::Fdd { bands: vec![3, 4] }
}

fn desk_cfg(algorithm: Algorithm) -> AgentConfig {
    AgentConfig {
        offline_epochs: 200,
        online_epochs: 4,
        steps_per_epoch: 101,
        online_learning: false,
        ..AgentConfig::with_algorithm(algorithm)
    }
}

/// Best single-step reward achievable against a fixed occupancy, by
/// exhaustively scoring every action.
fn oracle_best_reward(occupancy: &OccupancyVector, cfg: &EnvConfig) -> f64 {
    enumerate_actions(occupancy.len())
        .unwrap()
        .iter()
        .map(|a| {
            let n_c = count_collisions(a, occupancy).unwrap();
            compute_reward(n_c, a.width(), 0, cfg).unwrap().total
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn static_state() -> spectrum_env::InterferenceState {
    let occ = OccupancyVector::from_occupied(5, &[3, 4]).unwrap();
    encode_state(&[occ.clone(), occ]).unwrap()
}

#[test]
fn policy_iteration_learns_the_left_three_bands() {
    let env_cfg = EnvConfig::default();
    let mut agent = Agent::new(desk_cfg(Algorithm::PolicyIteration), &env_cfg, 11).unwrap();
    let mut env = Environment::new(env_cfg.clone(), static_source(), 11).unwrap();
    offline_train(&mut agent, &mut env).unwrap();

    let state = static_state();
    let policy = agent.policy().expect("trained");
    let action = &agent.actions()[policy.action(state.index())];
    assert_eq!((action.lo(), action.hi()), (0, 2), "expected mask 11100");
}

#[test]
fn deep_agents_reach_near_oracle_reward_on_a_static_spectrum() {
    let env_cfg = EnvConfig::default();
    let occ = OccupancyVector::from_occupied(5, &[3, 4]).unwrap();
    let oracle = oracle_best_reward(&occ, &env_cfg);
    assert_eq!(oracle, 20.0);

    for (algorithm, seed) in
        [(Algorithm::Dqn, 21u64), (Algorithm::Ddqn, 22), (Algorithm::Drqn, 23)]
    {
        let mut agent = Agent::new(desk_cfg(algorithm), &env_cfg, seed).unwrap();
        let mut train_env = Environment::new(env_cfg.clone(), static_source(), seed).unwrap();
        offline_train(&mut agent, &mut train_env).unwrap();

        let mut eval_env =
            Environment::new(env_cfg.clone(), static_source(), seed + 100).unwrap();
        let log = online_evaluate(&mut agent, &mut eval_env).unwrap();
        let final_mean = log.stats.last().unwrap().mean_reward;
        assert!(
            final_mean >= 0.9 * oracle,
            "{algorithm}: final epoch mean {final_mean} below 0.9 x {oracle}"
        );
    }
}

#[test]
fn deep_agents_select_the_left_three_bands_greedily() {
    let env_cfg = EnvConfig::default();
    let state = static_state();
    for (algorithm, seed) in
        [(Algorithm::Dqn, 31u64), (Algorithm::Ddqn, 32), (Algorithm::Drqn, 33)]
    {
        let mut agent = Agent::new(desk_cfg(algorithm), &env_cfg, seed).unwrap();
        let mut env = Environment::new(env_cfg.clone(), static_source(), seed).unwrap();
        offline_train(&mut agent, &mut env).unwrap();
        let action = agent.select_action(&state, Phase::Online).unwrap();
        assert_eq!(
            (action.lo(), action.hi()),
            (0, 2),
            "{algorithm} picked {:?} instead of bands 0..=2",
            (action.lo(), action.hi())
        );
    }
}

#[test]
fn drqn_update_changes_parameters() {
    let env_cfg = EnvConfig::default();
    let cfg = AgentConfig { n_online: 8, ..AgentConfig::with_algorithm(Algorithm::Drqn) };
    let mut agent = Agent::new(cfg, &env_cfg, 7).unwrap();

    let occ = OccupancyVector::from_occupied(5, &[3, 4]).unwrap();
    let state = encode_state(&[occ.clone(), occ]).unwrap();
    let before = agent.network_params().unwrap().flat();
    // Feed exactly one full episode (q = 8) with a nonzero error signal.
    for k in 0..8 {
        let transition = Transition {
            state: state.clone(),
            action: RadarAction::new(0, k % 5, 5).unwrap(),
            reward: 10.0,
            next_state: state.clone(),
        };
        agent.observe(&transition);
        agent.train_tick(Phase::Offline).unwrap();
    }
    assert_eq!(agent.sgd_updates(), 1);
    let after = agent.network_params().unwrap().flat();
    assert_ne!(before, after);
}

#[test]
fn dqn_improves_over_its_first_online_epoch_on_shifted_tdd() {
    // Trained on one duty cycle, evaluated on another: online learning
    // must lift the final-quartile mean above the first epoch. Desk-scale
    // CPIs keep the adaptation window aligned with the radar's.
    let env_cfg = EnvConfig { cpi_pulses: 64, ..EnvConfig::default() };
    let train =
        InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 0 };
    let eval =
        InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 2, off_steps: 3, phase: 0 };
    let cfg = AgentConfig::with_algorithm(Algorithm::Dqn);
    let mut agent = Agent::new(cfg, &env_cfg, 1234).unwrap();
    let mut train_env = Environment::new(env_cfg.clone(), train, 1234).unwrap();
    offline_train(&mut agent, &mut train_env).unwrap();
    let mut eval_env = Environment::new(env_cfg, eval, 4321).unwrap();
    let log = online_evaluate(&mut agent, &mut eval_env).unwrap();

    let first = log.stats[0].mean_reward;
    let quartile = log.stats.len() / 4;
    let final_quartile: f64 = log.stats[log.stats.len() - quartile..]
        .iter()
        .map(|s| s.mean_reward)
        .sum::<f64>()
        / quartile as f64;
    println!("first epoch {first}, final quartile {final_quartile}");
    assert!(
        final_quartile >= first,
        "final quartile {final_quartile} did not reach first epoch {first}"
    );
}

#[test]
fn episode_transitions_chain_consecutively() {
    let env_cfg = EnvConfig::default();
    let source =
        InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 0 };
    let mut env = Environment::new(env_cfg, source, 9).unwrap();
    env.warm_up().unwrap();
    let mut prev: Option<Transition> = None;
    for _ in 0..20 {
        let (t, _) = env.step(RadarAction::full_band(5)).unwrap();
        if let Some(p) = prev {
            assert_eq!(p.next_state, t.state);
        }
        prev = Some(t);
    }
}
