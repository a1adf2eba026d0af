use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::EnvError;
use crate::occupancy::OccupancyVector;

/// Margin in dB that synthetic sources sit above/below the threshold.
pub const SYNTH_POWER_MARGIN_DB: f64 = 10.0;

/// Synthetic per-band received power for a source without a signal-level
/// model: occupied bands report `p0 + 10` dB, open bands `p0 - 10` dB,
/// plus optional Gaussian jitter.
pub fn synth_powers_db<R: Rng>(
    occupancy: &OccupancyVector,
    p0: f64,
    jitter_db: f64,
    rng: &mut R,
) -> Vec<f64> {
    occupancy
        .iter()
        .map(|occupied| {
            let base = if occupied { p0 + SYNTH_POWER_MARGIN_DB } else { p0 - SYNTH_POWER_MARGIN_DB };
            if jitter_db > 0.0 {
                let z: f64 = StandardNormal.sample(rng);
                base + jitter_db * z
            } else {
                base
            }
        })
        .collect()
}

/// Thresholds per-band powers against P0: band `i` is reported occupied
/// iff `powers_db[i] >= p0`.
pub fn sense(powers_db: &[f64], n_subbands: usize, p0: f64) -> Result<OccupancyVector, EnvError> {
    if powers_db.len() != n_subbands {
        return Err(EnvError::DimensionMismatch { expected: n_subbands, got: powers_db.len() });
    }
    Ok(OccupancyVector::new(powers_db.iter().map(|&p| p >= p0).collect()))
}
