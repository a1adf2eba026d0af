//! Numerical verification of the hand-written backprop, plus the
//! determinism, statefulness and descent properties the agents rely on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use neural_core::{check_gradients, Activation, LayerSpec, NetworkSpec, QNetwork, SgdConfig};

fn random_batch(
    rng: &mut ChaCha8Rng,
    input_dim: usize,
    output_dim: usize,
    len: usize,
) -> (Vec<Vec<f64>>, Vec<usize>, Vec<f64>) {
    let inputs: Vec<Vec<f64>> = (0..len)
        .map(|_| (0..input_dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let actions: Vec<usize> = (0..len).map(|_| rng.random_range(0..output_dim)).collect();
    let targets: Vec<f64> = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
    (inputs, actions, targets)
}

fn random_dense_spec(rng: &mut ChaCha8Rng) -> NetworkSpec {
    let input_dim = rng.random_range(1..=6usize);
    let output_dim = rng.random_range(1..=5usize);
    let depth = rng.random_range(0..=2usize);
    let hidden = (0..depth)
        .map(|_| LayerSpec::Dense {
            width: rng.random_range(1..=8usize),
            activation: match rng.random_range(0..3u8) {
                0 => Activation::Relu,
                1 => Activation::Tanh,
                _ => Activation::Identity,
            },
        })
        .collect();
    NetworkSpec { input_dim, hidden, output_dim }
}

#[test]
fn finite_differences_agree_on_twenty_random_nets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        // Trials 0 and 10 exercise the recurrent stack; the rest are dense.
        let spec = if trial % 10 == 0 {
            NetworkSpec::recurrent(
                rng.random_range(2..=5usize),
                rng.random_range(2..=6usize),
                rng.random_range(2..=6usize),
                rng.random_range(2..=4usize),
            )
        } else {
            random_dense_spec(&mut rng)
        };
        let seq_len = if spec.has_lstm() { rng.random_range(2..=5usize) } else { rng.random_range(1..=4usize) };
        let net = QNetwork::init(spec.clone(), rng.random())
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let (inputs, actions, targets) =
            random_batch(&mut rng, spec.input_dim, spec.output_dim, seq_len);
        let err = check_gradients(&net, &inputs, &actions, &targets, 1e-5).unwrap();
        assert!(err < 1e-4, "trial {trial}: max relative error {err}");
        worst = worst.max(err);
    }
    println!("worst relative gradient error over 20 nets: {worst:.3e}");
}

#[test]
fn lstm_gradient_check_holds_on_its_own() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcafe);
    let spec = NetworkSpec::recurrent(4, 6, 5, 3);
    let net = QNetwork::init(spec.clone(), 77).unwrap();
    let (inputs, actions, targets) = random_batch(&mut rng, 4, 3, 6);
    let err = check_gradients(&net, &inputs, &actions, &targets, 1e-5).unwrap();
    assert!(err < 1e-4, "lstm relative error {err}");
}

#[test]
fn training_is_bitwise_deterministic() {
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let spec = NetworkSpec::mlp(4, &[16, 16], 3);
        let mut net = QNetwork::init(spec, 42).unwrap();
        let cfg = SgdConfig { learning_rate: 1e-2, batch_size: 8, grad_clip: None };
        for _ in 0..25 {
            let (inputs, actions, targets) = random_batch(&mut rng, 4, 3, 8);
            let (_, grads) = net.backward(&inputs, &actions, &targets).unwrap();
            net.sgd_step(&grads, &cfg);
        }
        net.params().flat()
    };
    let a = run();
    let b = run();
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn lstm_output_depends_on_carried_state() {
    let net = QNetwork::init(NetworkSpec::recurrent(3, 4, 4, 2), 7).unwrap();
    let step1 = vec![0.5, -0.25, 1.0];
    let step2 = vec![-0.75, 0.1, 0.3];
    let rec0 = net.initial_recurrent_state().unwrap();
    let (_, rec1) = net.forward(&step1, Some(&rec0)).unwrap();
    let (carried, _) = net.forward(&step2, rec1.as_ref()).unwrap();
    let (reset, _) = net.forward(&step2, Some(&rec0)).unwrap();
    assert_ne!(carried, reset, "carried state must influence the output");
}

#[test]
fn sgd_descends_on_a_fixed_regression() {
    // Fit constant targets per action from random inputs.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let spec = NetworkSpec::mlp(3, &[16], 2);
    let mut net = QNetwork::init(spec, 0).unwrap();
    let (inputs, actions, _) = random_batch(&mut rng, 3, 2, 32);
    let targets: Vec<f64> =
        actions.iter().map(|&a| if a == 0 { 1.5 } else { -0.5 }).collect();
    let initial = net.batch_loss(&inputs, &actions, &targets).unwrap();
    let cfg = SgdConfig { learning_rate: 5e-2, batch_size: 32, grad_clip: None };
    for _ in 0..500 {
        let (_, grads) = net.backward(&inputs, &actions, &targets).unwrap();
        net.sgd_step(&grads, &cfg);
    }
    let final_loss = net.batch_loss(&inputs, &actions, &targets).unwrap();
    assert!(
        final_loss < 0.01 * initial,
        "loss only fell from {initial} to {final_loss}"
    );
}

/// Independent re-implementation of the forward arithmetic, written as
/// straight index loops against the serialized parameters.
mod reference {
    pub struct DenseRef {
        pub w: Vec<Vec<f64>>,
        pub b: Vec<f64>,
        pub activation: fn(f64) -> f64,
    }

    pub fn dense_forward(layer: &DenseRef, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(layer.b.len());
        for r in 0..layer.b.len() {
            let mut acc = layer.b[r];
            for c in 0..x.len() {
                acc += layer.w[r][c] * x[c];
            }
            out.push((layer.activation)(acc));
        }
        out
    }
}

#[test]
fn forward_matches_independent_reimplementation() {
    use neural_core::LayerParams;
    use reference::{dense_forward, DenseRef};

    let spec = NetworkSpec {
        input_dim: 3,
        hidden: vec![
            LayerSpec::Dense { width: 5, activation: Activation::Tanh },
            LayerSpec::Dense { width: 4, activation: Activation::Relu },
        ],
        output_dim: 2,
    };
    let net = QNetwork::init(spec, 2024).unwrap();

    // Rebuild each layer as plain nested Vecs.
    let mut layers = Vec::new();
    let activations: Vec<fn(f64) -> f64> =
        vec![|z| z.tanh(), |z| z.max(0.0), |z| z];
    for (idx, lp) in net.params().layers.iter().enumerate() {
        let LayerParams::Dense { w, b } = lp else { panic!("dense only") };
        let rows = (0..w.rows())
            .map(|r| (0..w.cols()).map(|c| w.get(r, c)).collect())
            .collect();
        layers.push(DenseRef { w: rows, b: b.clone(), activation: activations[idx] });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let input: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (q, _) = net.forward(&input, None).unwrap();
        let mut x = input;
        for layer in &layers {
            x = dense_forward(layer, &x);
        }
        for (a, b) in q.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12, "mismatch {a} vs {b}");
        }
    }
}

#[test]
fn episode_order_changes_recurrent_gradients() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let spec = NetworkSpec::recurrent(3, 4, 4, 2);
    let net = QNetwork::init(spec, 55).unwrap();
    let (inputs, actions, targets) = random_batch(&mut rng, 3, 2, 6);
    let (_, grads) = net.backward(&inputs, &actions, &targets).unwrap();
    let mut shuffled_inputs = inputs.clone();
    shuffled_inputs.reverse();
    let mut shuffled_actions = actions.clone();
    shuffled_actions.reverse();
    let mut shuffled_targets = targets.clone();
    shuffled_targets.reverse();
    let (_, grads_shuffled) =
        net.backward(&shuffled_inputs, &shuffled_actions, &shuffled_targets).unwrap();
    assert_ne!(grads.flat(), grads_shuffled.flat());
}
