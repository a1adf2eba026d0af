use serde::{Deserialize, Serialize};

use crate::compress::RangeDopplerMap;
use crate::error::DspError;

/// Cell-averaging CFAR window: per side, `n_guard` guard cells around the
/// cell under test and `n_train` training cells beyond them, in both
/// dimensions. At map edges the window truncates and the training count
/// is recomputed per cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CfarConfig {
    pub n_train: usize,
    pub n_guard: usize,
    pub pfa_theoretical: f64,
}

impl Default for CfarConfig {
    fn default() -> Self {
        Self { n_train: 6, n_guard: 2, pfa_theoretical: 1e-3 }
    }
}

impl CfarConfig {
    pub fn validate(&self) -> Result<(), DspError> {
        if self.n_train == 0 {
            return Err(DspError::InvalidConfig("n_train must be >= 1".into()));
        }
        if !(self.pfa_theoretical > 0.0 && self.pfa_theoretical < 1.0) {
            return Err(DspError::InvalidConfig("pfa must lie in (0, 1)".into()));
        }
        Ok(())
    }

    fn extent(&self) -> usize {
        self.n_train + self.n_guard
    }
}

/// Scale factor on the training-cell mean that holds the theoretical
/// false-alarm probability for square-law cells in exponential noise:
/// alpha = n (pfa^(-1/n) - 1).
pub fn cfar_threshold_factor(pfa: f64, n_train_total: usize) -> f64 {
    let n = n_train_total as f64;
    n * (pfa.powf(-1.0 / n) - 1.0)
}

/// Prefix-sum table for O(1) rectangle sums over the map.
struct IntegralImage {
    cols: usize,
    table: Vec<f64>,
}

impl IntegralImage {
    fn new(map: &RangeDopplerMap) -> Self {
        let (rows, cols) = (map.rows(), map.cols());
        let stride = cols + 1;
        let mut table = vec![0.0; (rows + 1) * stride];
        for r in 0..rows {
            let mut row_sum = 0.0;
            for c in 0..cols {
                row_sum += map.value(r, c);
                table[(r + 1) * stride + (c + 1)] = table[r * stride + (c + 1)] + row_sum;
            }
        }
        Self { cols, table }
    }

    /// Inclusive rectangle sum.
    fn rect(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> f64 {
        let stride = self.cols + 1;
        self.table[(r1 + 1) * stride + (c1 + 1)] - self.table[r0 * stride + (c1 + 1)]
            - self.table[(r1 + 1) * stride + c0]
            + self.table[r0 * stride + c0]
    }
}

/// Cell-averaging CFAR over the full map. A cell is declared a detection
/// when its value exceeds `alpha(pfa, n) * mean(training cells)`, where
/// the training cells form the 2D annulus between the guard box and the
/// outer box, truncated at the edges with the threshold factor
/// recomputed from the per-cell training count.
pub fn ca_cfar(
    map: &RangeDopplerMap,
    cfg: &CfarConfig,
) -> Result<Vec<(usize, usize)>, DspError> {
    cfg.validate()?;
    let (rows, cols) = (map.rows(), map.cols());
    let window = 2 * cfg.extent() + 1;
    if rows < window || cols < window {
        return Err(DspError::InvalidConfig(format!(
            "cfar window {window}x{window} exceeds the {rows}x{cols} map"
        )));
    }
    let integral = IntegralImage::new(map);
    let ext = cfg.extent() as isize;
    let guard = cfg.n_guard as isize;
    let mut detections = Vec::new();
    for r in 0..rows {
        let ri = r as isize;
        let (or0, or1) = clamp_span(ri - ext, ri + ext, rows);
        let (gr0, gr1) = clamp_span(ri - guard, ri + guard, rows);
        for c in 0..cols {
            let ci = c as isize;
            let (oc0, oc1) = clamp_span(ci - ext, ci + ext, cols);
            let (gc0, gc1) = clamp_span(ci - guard, ci + guard, cols);
            let outer_sum = integral.rect(or0, or1, oc0, oc1);
            let guard_sum = integral.rect(gr0, gr1, gc0, gc1);
            let outer_count = (or1 - or0 + 1) * (oc1 - oc0 + 1);
            let guard_count = (gr1 - gr0 + 1) * (gc1 - gc0 + 1);
            let train_count = outer_count - guard_count;
            if train_count == 0 {
                continue;
            }
            let noise = (outer_sum - guard_sum) / train_count as f64;
            let alpha = cfar_threshold_factor(cfg.pfa_theoretical, train_count);
            if map.value(r, c) > alpha * noise {
                detections.push((r, c));
            }
        }
    }
    Ok(detections)
}

fn clamp_span(lo: isize, hi: isize, len: usize) -> (usize, usize) {
    (lo.max(0) as usize, (hi.min(len as isize - 1)) as usize)
}
