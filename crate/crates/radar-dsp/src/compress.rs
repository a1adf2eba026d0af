use num_complex::Complex64;
use rustfft::FftPlanner;

/// Magnitude-squared power over (range bin, Doppler bin).
#[derive(Debug, Clone)]
pub struct RangeDopplerMap {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RangeDopplerMap {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Range bins.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Doppler bins.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// N_p: total number of cells.
    pub fn n_cells(&self) -> usize {
        self.data.len()
    }

    pub fn value(&self, range_bin: usize, doppler_bin: usize) -> f64 {
        self.data[range_bin * self.cols + doppler_bin]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn peak(&self) -> ((usize, usize), f64) {
        let mut best = ((0, 0), f64::NEG_INFINITY);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.value(r, c);
                if v > best.1 {
                    best = ((r, c), v);
                }
            }
        }
        best
    }
}

/// Cross-correlation of `rx` with the conjugate time-reversed reference,
/// computed in the frequency domain. Output index n holds
/// `sum_k rx[n+k] * conj(reference[k])`, so a clean echo delayed by d
/// samples peaks at index d with value `amplitude * reference energy`.
/// Output length equals the rx length.
pub fn matched_filter(rx: &[Complex64], reference: &[Complex64]) -> Vec<Complex64> {
    let fft_len = (rx.len() + reference.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(fft_len);
    let inv = planner.plan_fft_inverse(fft_len);

    let zero = Complex64::new(0.0, 0.0);
    let mut rx_buf = rx.to_vec();
    rx_buf.resize(fft_len, zero);
    fwd.process(&mut rx_buf);

    let mut ref_buf = reference.to_vec();
    ref_buf.resize(fft_len, zero);
    fwd.process(&mut ref_buf);

    for (x, h) in rx_buf.iter_mut().zip(&ref_buf) {
        *x *= h.conj();
    }
    inv.process(&mut rx_buf);
    let scale = 1.0 / fft_len as f64;
    rx_buf.truncate(rx.len());
    for v in &mut rx_buf {
        *v *= scale;
    }
    rx_buf
}

/// Slow-time DFT across pulses per range bin, magnitude squared.
/// Doppler bin d corresponds to d / (K * PRI) Hz, with negative shifts
/// wrapped to the upper bins (no FFT shift).
pub fn range_doppler(pulses: &[Vec<Complex64>]) -> RangeDopplerMap {
    assert!(pulses.len() >= 2, "need at least 2 pulses for a Doppler axis");
    let k = pulses.len();
    let n_range = pulses[0].len();
    let fft = FftPlanner::new().plan_fft_forward(k);
    let mut data = vec![0.0; n_range * k];
    let mut slow = vec![Complex64::new(0.0, 0.0); k];
    for range_bin in 0..n_range {
        for (p, s) in pulses.iter().zip(slow.iter_mut()) {
            *s = p[range_bin];
        }
        fft.process(&mut slow);
        for (d, s) in slow.iter().enumerate() {
            data[range_bin * k + d] = s.norm_sqr();
        }
    }
    RangeDopplerMap { rows: n_range, cols: k, data }
}
