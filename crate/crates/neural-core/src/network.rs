use crate::activation::sigmoid;
use crate::error::NeuralError;
use crate::params::{LayerParams, QNetworkParams};
use crate::spec::{LayerSpec, NetworkSpec};

/// Hidden and cell state carried between steps by the LSTM layer.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl RecurrentState {
    pub fn zeros(width: usize) -> Self {
        Self { h: vec![0.0; width], c: vec![0.0; width] }
    }
}

/// Plain SGD settings.
#[derive(Debug, Clone)]
pub struct SgdConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Optional global L2-norm clip applied to the gradient before the step.
    pub grad_clip: Option<f64>,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-3, batch_size: 32, grad_clip: None }
    }
}

/// A Q-network: spec plus parameters. Forward maps a flattened state to
/// one q-value per action; backward produces gradients of the mean
/// squared error against per-sample targets, where only the taken
/// action's output contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct QNetwork {
    spec: NetworkSpec,
    params: QNetworkParams,
}

struct DenseCache {
    x: Vec<f64>,
    z: Vec<f64>,
}

struct LstmCache {
    x: Vec<f64>,
    h_prev: Vec<f64>,
    c_prev: Vec<f64>,
    gate_i: Vec<f64>,
    gate_f: Vec<f64>,
    gate_g: Vec<f64>,
    gate_o: Vec<f64>,
    tanh_c: Vec<f64>,
}

enum StepCache {
    Dense(DenseCache),
    Lstm(LstmCache),
}

impl QNetwork {
    pub fn init(spec: NetworkSpec, seed: u64) -> Result<Self, NeuralError> {
        let params = QNetworkParams::init(&spec, seed)?;
        Ok(Self { spec, params })
    }

    /// Wraps existing parameters after checking every shape against the spec.
    pub fn from_params(spec: NetworkSpec, params: QNetworkParams) -> Result<Self, NeuralError> {
        spec.validate()?;
        let layers = spec.effective_layers();
        if layers.len() != params.layers.len() {
            return Err(NeuralError::InvalidSpec(format!(
                "spec has {} layers, params have {}",
                layers.len(),
                params.layers.len()
            )));
        }
        for ((layer, input_width), lp) in layers.iter().zip(&params.layers) {
            let ok = match (layer, lp) {
                (LayerSpec::Dense { width, .. }, LayerParams::Dense { w, b }) => {
                    w.rows() == *width && w.cols() == *input_width && b.len() == *width
                }
                (LayerSpec::Lstm { width }, LayerParams::Lstm { w_ih, w_hh, b }) => {
                    w_ih.rows() == 4 * width
                        && w_ih.cols() == *input_width
                        && w_hh.rows() == 4 * width
                        && w_hh.cols() == *width
                        && b.len() == 4 * width
                }
                _ => false,
            };
            if !ok {
                return Err(NeuralError::InvalidSpec("layer shape mismatch".into()));
            }
        }
        Ok(Self { spec, params })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn params(&self) -> &QNetworkParams {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut QNetworkParams {
        &mut self.params
    }

    /// Fresh all-zero recurrent state when the network needs one.
    pub fn initial_recurrent_state(&self) -> Option<RecurrentState> {
        self.spec.lstm_width().map(RecurrentState::zeros)
    }

    /// One inference step. A recurrent state must be passed exactly when
    /// the network contains an LSTM layer; the advanced state is returned.
    pub fn forward(
        &self,
        input: &[f64],
        rec: Option<&RecurrentState>,
    ) -> Result<(Vec<f64>, Option<RecurrentState>), NeuralError> {
        let (q, rec_out, _) = self.step(input, rec)?;
        if !q.iter().all(|v| v.is_finite()) {
            return Err(NeuralError::NonFinite("q-values".into()));
        }
        Ok((q, rec_out))
    }

    fn step(
        &self,
        input: &[f64],
        rec: Option<&RecurrentState>,
    ) -> Result<(Vec<f64>, Option<RecurrentState>, Vec<StepCache>), NeuralError> {
        if input.len() != self.spec.input_dim {
            return Err(NeuralError::DimensionMismatch {
                expected: self.spec.input_dim,
                got: input.len(),
            });
        }
        match (self.spec.has_lstm(), rec.is_some()) {
            (true, false) => return Err(NeuralError::MissingRecurrentState),
            (false, true) => return Err(NeuralError::UnexpectedRecurrentState),
            _ => {}
        }

        let mut x = input.to_vec();
        let mut rec_out = None;
        let mut caches = Vec::with_capacity(self.params.layers.len());
        for (lp, (layer, _)) in self.params.layers.iter().zip(self.spec.effective_layers()) {
            match (lp, layer) {
                (LayerParams::Dense { w, b }, LayerSpec::Dense { activation, .. }) => {
                    let mut z = vec![0.0; w.rows()];
                    w.matvec(&x, &mut z);
                    for (zv, bv) in z.iter_mut().zip(b) {
                        *zv += bv;
                    }
                    let a: Vec<f64> = z.iter().map(|&zv| activation.apply(zv)).collect();
                    caches.push(StepCache::Dense(DenseCache { x, z }));
                    x = a;
                }
                (LayerParams::Lstm { w_ih, w_hh, b }, LayerSpec::Lstm { width }) => {
                    let state = rec.expect("presence checked above");
                    if state.h.len() != width || state.c.len() != width {
                        return Err(NeuralError::DimensionMismatch {
                            expected: width,
                            got: state.h.len(),
                        });
                    }
                    let mut gates = vec![0.0; 4 * width];
                    w_ih.matvec(&x, &mut gates);
                    let mut hh = vec![0.0; 4 * width];
                    w_hh.matvec(&state.h, &mut hh);
                    for ((g, h), bv) in gates.iter_mut().zip(hh).zip(b) {
                        *g += h + bv;
                    }
                    // Gate blocks: input, forget, candidate, output.
                    let gate_i: Vec<f64> = gates[..width].iter().map(|&z| sigmoid(z)).collect();
                    let gate_f: Vec<f64> =
                        gates[width..2 * width].iter().map(|&z| sigmoid(z)).collect();
                    let gate_g: Vec<f64> =
                        gates[2 * width..3 * width].iter().map(|&z| z.tanh()).collect();
                    let gate_o: Vec<f64> =
                        gates[3 * width..].iter().map(|&z| sigmoid(z)).collect();
                    let c: Vec<f64> = (0..width)
                        .map(|j| gate_f[j] * state.c[j] + gate_i[j] * gate_g[j])
                        .collect();
                    let tanh_c: Vec<f64> = c.iter().map(|&v| v.tanh()).collect();
                    let h: Vec<f64> = (0..width).map(|j| gate_o[j] * tanh_c[j]).collect();
                    caches.push(StepCache::Lstm(LstmCache {
                        x,
                        h_prev: state.h.clone(),
                        c_prev: state.c.clone(),
                        gate_i,
                        gate_f,
                        gate_g,
                        gate_o,
                        tanh_c,
                    }));
                    rec_out = Some(RecurrentState { h: h.clone(), c });
                    x = h;
                }
                _ => unreachable!("from_params checks layer kinds"),
            }
        }
        Ok((x, rec_out, caches))
    }

    fn forward_batch(
        &self,
        inputs: &[Vec<f64>],
        with_caches: bool,
    ) -> Result<(Vec<Vec<f64>>, Vec<Vec<StepCache>>), NeuralError> {
        let mut rec = self.initial_recurrent_state();
        let mut outputs = Vec::with_capacity(inputs.len());
        let mut caches = Vec::with_capacity(if with_caches { inputs.len() } else { 0 });
        for input in inputs {
            let (q, rec_next, cache) = self.step(input, rec.as_ref())?;
            rec = rec_next;
            outputs.push(q);
            if with_caches {
                caches.push(cache);
            }
        }
        Ok((outputs, caches))
    }

    fn check_batch(
        &self,
        inputs: &[Vec<f64>],
        actions: &[usize],
        targets: &[f64],
    ) -> Result<(), NeuralError> {
        if inputs.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        if inputs.len() != actions.len() || inputs.len() != targets.len() {
            return Err(NeuralError::DimensionMismatch {
                expected: inputs.len(),
                got: actions.len().min(targets.len()),
            });
        }
        if let Some(&bad) = actions.iter().find(|&&a| a >= self.spec.output_dim) {
            return Err(NeuralError::DimensionMismatch {
                expected: self.spec.output_dim,
                got: bad,
            });
        }
        Ok(())
    }

    /// Mean over the batch of (y - Q(s, a))^2. For a recurrent network
    /// the batch is a temporal sequence: the recurrent state starts at
    /// zero and is carried across samples in order.
    pub fn batch_loss(
        &self,
        inputs: &[Vec<f64>],
        actions: &[usize],
        targets: &[f64],
    ) -> Result<f64, NeuralError> {
        self.check_batch(inputs, actions, targets)?;
        let (outputs, _) = self.forward_batch(inputs, false)?;
        let n = inputs.len() as f64;
        Ok(outputs
            .iter()
            .zip(actions)
            .zip(targets)
            .map(|((q, &a), &y)| {
                let e = q[a] - y;
                e * e
            })
            .sum::<f64>()
            / n)
    }

    /// Gradients of [`Self::batch_loss`] with respect to every parameter.
    /// Recurrent layers are unrolled over the whole batch (backpropagation
    /// through time), so sample order matters whenever an LSTM is present.
    pub fn backward(
        &self,
        inputs: &[Vec<f64>],
        actions: &[usize],
        targets: &[f64],
    ) -> Result<(f64, QNetworkParams), NeuralError> {
        self.check_batch(inputs, actions, targets)?;
        let (outputs, caches) = self.forward_batch(inputs, true)?;
        let n = inputs.len() as f64;
        let loss = outputs
            .iter()
            .zip(actions)
            .zip(targets)
            .map(|((q, &a), &y)| {
                let e = q[a] - y;
                e * e
            })
            .sum::<f64>()
            / n;

        let mut grads = QNetworkParams::zeros(&self.spec)?;
        let layer_specs = self.spec.effective_layers();
        let lstm_width = self.spec.lstm_width();
        let mut dh_next = lstm_width.map(|w| vec![0.0; w]).unwrap_or_default();
        let mut dc_next = dh_next.clone();

        for t in (0..inputs.len()).rev() {
            let e = outputs[t][actions[t]] - targets[t];
            let mut dout = vec![0.0; self.spec.output_dim];
            dout[actions[t]] = 2.0 * e / n;

            for layer_idx in (0..self.params.layers.len()).rev() {
                let cache = &caches[t][layer_idx];
                match (&self.params.layers[layer_idx], &mut grads.layers[layer_idx], cache) {
                    (
                        LayerParams::Dense { w, .. },
                        LayerParams::Dense { w: gw, b: gb },
                        StepCache::Dense(dc),
                    ) => {
                        let activation = match &layer_specs[layer_idx].0 {
                            LayerSpec::Dense { activation, .. } => *activation,
                            _ => unreachable!(),
                        };
                        let dz: Vec<f64> = dout
                            .iter()
                            .zip(&dc.z)
                            .map(|(&d, &z)| d * activation.derivative(z))
                            .collect();
                        gw.add_outer(&dz, &dc.x);
                        for (g, d) in gb.iter_mut().zip(&dz) {
                            *g += d;
                        }
                        let mut dx = vec![0.0; w.cols()];
                        w.matvec_transpose(&dz, &mut dx);
                        dout = dx;
                    }
                    (
                        LayerParams::Lstm { w_ih, w_hh, .. },
                        LayerParams::Lstm { w_ih: g_ih, w_hh: g_hh, b: gb },
                        StepCache::Lstm(lc),
                    ) => {
                        let width = lstm_width.expect("lstm layer implies width");
                        let dh: Vec<f64> =
                            dout.iter().zip(&dh_next).map(|(&a, &b)| a + b).collect();
                        let mut dc = vec![0.0; width];
                        for j in 0..width {
                            let dtanh = 1.0 - lc.tanh_c[j] * lc.tanh_c[j];
                            dc[j] = dh[j] * lc.gate_o[j] * dtanh + dc_next[j];
                        }
                        let mut dgates = vec![0.0; 4 * width];
                        for j in 0..width {
                            let di = dc[j] * lc.gate_g[j];
                            let df = dc[j] * lc.c_prev[j];
                            let dg = dc[j] * lc.gate_i[j];
                            let do_ = dh[j] * lc.tanh_c[j];
                            dgates[j] = di * lc.gate_i[j] * (1.0 - lc.gate_i[j]);
                            dgates[width + j] = df * lc.gate_f[j] * (1.0 - lc.gate_f[j]);
                            dgates[2 * width + j] = dg * (1.0 - lc.gate_g[j] * lc.gate_g[j]);
                            dgates[3 * width + j] = do_ * lc.gate_o[j] * (1.0 - lc.gate_o[j]);
                        }
                        g_ih.add_outer(&dgates, &lc.x);
                        g_hh.add_outer(&dgates, &lc.h_prev);
                        for (g, d) in gb.iter_mut().zip(&dgates) {
                            *g += d;
                        }
                        let mut dx = vec![0.0; w_ih.cols()];
                        w_ih.matvec_transpose(&dgates, &mut dx);
                        w_hh.matvec_transpose(&dgates, &mut dh_next);
                        for j in 0..width {
                            dc_next[j] = dc[j] * lc.gate_f[j];
                        }
                        dout = dx;
                    }
                    _ => unreachable!("cache kinds mirror layer kinds"),
                }
            }
        }
        Ok((loss, grads))
    }

    /// θ' = θ - α ∇L, with the gradient norm-clipped first when configured.
    pub fn sgd_step(&mut self, grads: &QNetworkParams, cfg: &SgdConfig) {
        let scale = match cfg.grad_clip {
            Some(clip) => {
                let norm = grads.l2_norm();
                if norm > clip {
                    clip / norm
                } else {
                    1.0
                }
            }
            None => 1.0,
        };
        self.params.axpy(-cfg.learning_rate * scale, grads);
    }
}
