use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};
use spectrum_env::{OccupancyVector, RadarAction};

use crate::chirp::{band_bins, lfm_chirp};
use crate::compress::{range_doppler, RangeDopplerMap};
use crate::config::{RadarConfig, Scene};
use crate::error::DspError;

/// One CPI's worth of received pulses, before compression.
pub type PulseMatrix = Vec<Vec<Complex64>>;

/// Plans FFTs once and caches per-action reference spectra, so whole CPIs
/// can be synthesized and processed repeatedly at speed.
pub struct CpiProcessor {
    cfg: RadarConfig,
    mf_len: usize,
    mf_fwd: Arc<dyn Fft<f64>>,
    mf_inv: Arc<dyn Fft<f64>>,
    interference_inv: Arc<dyn Fft<f64>>,
    chirps: HashMap<(usize, usize), Vec<Complex64>>,
    ref_spectra: HashMap<(usize, usize), Vec<Complex64>>,
    band_bin_cache: Vec<Vec<usize>>,
}

impl CpiProcessor {
    pub fn new(cfg: RadarConfig) -> Result<Self, DspError> {
        cfg.validate()?;
        let n_pri = cfg.samples_per_pri();
        let mf_len = (n_pri + cfg.samples_per_pulse() - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let mf_fwd = planner.plan_fft_forward(mf_len);
        let mf_inv = planner.plan_fft_inverse(mf_len);
        let interference_inv = planner.plan_fft_inverse(n_pri);
        let band_bin_cache =
            (0..cfg.n_subbands).map(|b| band_bins(b, n_pri, &cfg)).collect();
        Ok(Self {
            cfg,
            mf_len,
            mf_fwd,
            mf_inv,
            interference_inv,
            chirps: HashMap::new(),
            ref_spectra: HashMap::new(),
            band_bin_cache,
        })
    }

    pub fn config(&self) -> &RadarConfig {
        &self.cfg
    }

    fn chirp_for(&mut self, action: &RadarAction) -> &[Complex64] {
        let key = (action.lo(), action.hi());
        let cfg = &self.cfg;
        self.chirps.entry(key).or_insert_with(|| lfm_chirp(action, cfg))
    }

    fn ref_spectrum_for(&mut self, action: &RadarAction) -> &[Complex64] {
        let key = (action.lo(), action.hi());
        if !self.ref_spectra.contains_key(&key) {
            let chirp = self.chirp_for(action).to_vec();
            let mut buf = chirp;
            buf.resize(self.mf_len, Complex64::new(0.0, 0.0));
            self.mf_fwd.process(&mut buf);
            self.ref_spectra.insert(key, buf);
        }
        &self.ref_spectra[&key]
    }

    /// Synthesizes one CPI: per pulse, the delayed Doppler-rotated echo of
    /// that pulse's chirp, band-limited interference on the occupied
    /// sub-bands, and complex white Gaussian noise.
    pub fn synthesize<R: Rng>(
        &mut self,
        actions: &[RadarAction],
        occupancy: &[OccupancyVector],
        scene: &Scene,
        rng: &mut R,
    ) -> Result<PulseMatrix, DspError> {
        if actions.len() != self.cfg.pulses_per_cpi {
            return Err(DspError::DimensionMismatch {
                expected: self.cfg.pulses_per_cpi,
                got: actions.len(),
            });
        }
        if occupancy.len() != actions.len() {
            return Err(DspError::DimensionMismatch {
                expected: actions.len(),
                got: occupancy.len(),
            });
        }
        scene.validate(&self.cfg)?;

        let n_pri = self.cfg.samples_per_pri();
        let delay = scene.target_range_bin(&self.cfg);
        let noise_sigma = (scene.noise_power / 2.0).sqrt();
        let mut pulses = Vec::with_capacity(actions.len());
        for (k, (action, occ)) in actions.iter().zip(occupancy).enumerate() {
            let mut row = vec![Complex64::new(0.0, 0.0); n_pri];

            // Target echo with per-pulse Doppler rotation.
            if scene.target_amplitude > 0.0 {
                let rotation = Complex64::from_polar(
                    scene.target_amplitude,
                    2.0 * PI * scene.target_doppler * k as f64 * self.cfg.pri,
                );
                let chirp = self.chirp_for(action);
                for (i, &s) in chirp.iter().enumerate() {
                    row[delay + i] += rotation * s;
                }
            }

            // Band-limited interference: Gaussian spectrum confined to the
            // occupied sub-bands, at interference_power per band.
            if scene.interference_power > 0.0 && occ.occupied_count() > 0 {
                let mut spectrum = vec![Complex64::new(0.0, 0.0); n_pri];
                for band in 0..self.cfg.n_subbands {
                    if !occ.occupied(band) {
                        continue;
                    }
                    let bins = &self.band_bin_cache[band];
                    let sigma = (scene.interference_power / bins.len() as f64).sqrt();
                    for &bin in bins {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        spectrum[bin] = Complex64::new(re, im) * (sigma / 2f64.sqrt());
                    }
                }
                self.interference_inv.process(&mut spectrum);
                for (r, s) in row.iter_mut().zip(&spectrum) {
                    *r += s;
                }
            }

            if scene.noise_power > 0.0 {
                for r in &mut row {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    *r += Complex64::new(re * noise_sigma, im * noise_sigma);
                }
            }
            pulses.push(row);
        }
        Ok(pulses)
    }

    /// Matched-filters every pulse against its own transmitted chirp.
    pub fn compress(
        &mut self,
        pulses: &PulseMatrix,
        actions: &[RadarAction],
    ) -> Result<PulseMatrix, DspError> {
        if pulses.len() != actions.len() {
            return Err(DspError::DimensionMismatch {
                expected: pulses.len(),
                got: actions.len(),
            });
        }
        let n_pri = self.cfg.samples_per_pri();
        let mf_len = self.mf_len;
        let scale = 1.0 / mf_len as f64;
        let mut out = Vec::with_capacity(pulses.len());
        for (row, action) in pulses.iter().zip(actions) {
            let reference = self.ref_spectrum_for(action).to_vec();
            let mut buf = row.clone();
            buf.resize(mf_len, Complex64::new(0.0, 0.0));
            self.mf_fwd.process(&mut buf);
            for (x, h) in buf.iter_mut().zip(&reference) {
                *x *= h.conj() * scale;
            }
            self.mf_inv.process(&mut buf);
            buf.truncate(n_pri);
            out.push(buf);
        }
        Ok(out)
    }

    /// Full chain for one CPI: synthesize, compress, form the map.
    pub fn process<R: Rng>(
        &mut self,
        actions: &[RadarAction],
        occupancy: &[OccupancyVector],
        scene: &Scene,
        rng: &mut R,
    ) -> Result<RangeDopplerMap, DspError> {
        let pulses = self.synthesize(actions, occupancy, scene, rng)?;
        let compressed = self.compress(&pulses, actions)?;
        Ok(range_doppler(&compressed))
    }
}

/// One-shot convenience wrapper around [`CpiProcessor::synthesize`].
pub fn synthesize_cpi<R: Rng>(
    actions: &[RadarAction],
    occupancy: &[OccupancyVector],
    scene: &Scene,
    cfg: &RadarConfig,
    rng: &mut R,
) -> Result<PulseMatrix, DspError> {
    CpiProcessor::new(cfg.clone())?.synthesize(actions, occupancy, scene, rng)
}
