use crate::error::NeuralError;
use crate::network::QNetwork;

/// Central finite differences over every parameter of `net`, returning
/// the maximum relative error against the analytic gradients:
/// |g_an - g_fd| / max(|g_an|, |g_fd|, 1e-8).
pub fn check_gradients(
    net: &QNetwork,
    inputs: &[Vec<f64>],
    actions: &[usize],
    targets: &[f64],
    epsilon: f64,
) -> Result<f64, NeuralError> {
    if !(1e-7..=1e-3).contains(&epsilon) {
        return Err(NeuralError::InvalidEpsilon(epsilon));
    }
    let (_, analytic) = net.backward(inputs, actions, targets)?;
    let analytic = analytic.flat();

    let mut work = net.clone();
    let mut max_rel: f64 = 0.0;
    for (idx, &g_an) in analytic.iter().enumerate() {
        {
            let mut flat = work.params_mut().flat_mut();
            *flat[idx] += epsilon;
        }
        let loss_plus = work.batch_loss(inputs, actions, targets)?;
        {
            let mut flat = work.params_mut().flat_mut();
            *flat[idx] -= 2.0 * epsilon;
        }
        let loss_minus = work.batch_loss(inputs, actions, targets)?;
        {
            let mut flat = work.params_mut().flat_mut();
            *flat[idx] += epsilon;
        }
        let g_fd = (loss_plus - loss_minus) / (2.0 * epsilon);
        let rel = (g_an - g_fd).abs() / g_an.abs().max(g_fd.abs()).max(1e-8);
        max_rel = max_rel.max(rel);
    }
    Ok(max_rel)
}
