use neural_core::{NeuralError, QNetwork, RecurrentState};

/// y = r + γ max_a' Q(s', a'; θ⁻), with the frozen target network doing
/// both selection and valuation.
pub fn dqn_target(
    reward: f64,
    next_input: &[f64],
    target: &QNetwork,
    gamma: f64,
    rec: Option<&RecurrentState>,
) -> Result<f64, NeuralError> {
    let (q, _) = target.forward(next_input, rec)?;
    let max_q = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(reward + gamma * max_q)
}

/// Double-DQN target: the online network picks the action, the frozen
/// target network values it. y = r + γ Q(s', argmax_a Q(s', a; θ); θ⁻).
pub fn ddqn_target(
    reward: f64,
    next_input: &[f64],
    online: &QNetwork,
    target: &QNetwork,
    gamma: f64,
    rec_online: Option<&RecurrentState>,
    rec_target: Option<&RecurrentState>,
) -> Result<f64, NeuralError> {
    let (q_online, _) = online.forward(next_input, rec_online)?;
    let best = argmax(&q_online);
    let (q_target, _) = target.forward(next_input, rec_target)?;
    Ok(reward + gamma * q_target[best])
}

/// First index of the maximum value; ties break low.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use neural_core::{LayerParams, NetworkSpec, QNetworkParams};

    /// Single linear layer whose output is fully determined by the bias.
    fn bias_net(biases: &[f64]) -> QNetwork {
        let spec = NetworkSpec { input_dim: 1, hidden: vec![], output_dim: biases.len() };
        let mut params = QNetworkParams::zeros(&spec).unwrap();
        if let LayerParams::Dense { b, .. } = &mut params.layers[0] {
            b.copy_from_slice(biases);
        }
        QNetwork::from_params(spec, params).unwrap()
    }

    #[test]
    fn zero_discount_returns_reward() {
        let target = bias_net(&[5.0, 2.0]);
        let y = dqn_target(3.0, &[0.0], &target, 0.0, None).unwrap();
        assert_eq!(y, 3.0);
        let online = bias_net(&[1.0, 9.0]);
        let y2 = ddqn_target(3.0, &[0.0], &online, &target, 0.0, None, None).unwrap();
        assert_eq!(y2, 3.0);
    }

    #[test]
    fn zero_target_network_returns_reward() {
        let target = bias_net(&[0.0, 0.0]);
        let y = dqn_target(7.0, &[0.0], &target, 0.9, None).unwrap();
        assert_eq!(y, 7.0);
    }

    #[test]
    fn dqn_target_arithmetic() {
        let target = bias_net(&[20.0, 4.0]);
        let y = dqn_target(10.0, &[0.0], &target, 0.9, None).unwrap();
        assert!((y - 28.0).abs() < 1e-12);
    }

    #[test]
    fn ddqn_collapses_to_dqn_with_shared_weights() {
        let net = bias_net(&[1.0, 8.0, -2.0]);
        let y_dqn = dqn_target(2.0, &[0.0], &net, 0.5, None).unwrap();
        let y_ddqn = ddqn_target(2.0, &[0.0], &net, &net, 0.5, None, None).unwrap();
        assert_eq!(y_dqn, y_ddqn);
    }

    #[test]
    fn decoupled_argmaxes_value_with_the_target_net() {
        // Online prefers action 0, target values action 0 lower than its
        // own maximum: the DDQN target must be strictly below the DQN one.
        let online = bias_net(&[10.0, 1.0]);
        let target = bias_net(&[2.0, 6.0]);
        let y_ddqn = ddqn_target(0.0, &[0.0], &online, &target, 1.0, None, None).unwrap();
        let y_dqn = dqn_target(0.0, &[0.0], &target, 1.0, None).unwrap();
        assert_eq!(y_ddqn, 2.0);
        assert_eq!(y_dqn, 6.0);
        assert!(y_ddqn < y_dqn);
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax(&[0.0, 5.0, 1.0]), 1);
        assert_eq!(argmax(&[3.0, 3.0, 3.0]), 0);
    }
}
