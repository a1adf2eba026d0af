use serde::{Deserialize, Serialize};

use crate::error::DspError;

/// Waveform and timing parameters of the simulated radar.
///
/// The sample rate doubles as the simulation bandwidth: the N sub-bands
/// tile `[-fs/2, fs/2)` of the complex baseband, so one sub-band spans
/// `fs / n_subbands` Hz.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RadarConfig {
    /// Complex sample rate in samples/s (= simulated total bandwidth).
    pub sample_rate: f64,
    /// Pulse repetition interval in seconds.
    pub pri: f64,
    /// Pulses integrated into one range-Doppler map.
    pub pulses_per_cpi: usize,
    /// Transmit pulse width in seconds.
    pub pulse_width: f64,
    /// Sub-bands tiling the simulated bandwidth.
    pub n_subbands: usize,
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self::full_scale()
    }
}

impl RadarConfig {
    /// Hardware-faithful scale: 100 Msps, 1000-pulse CPIs.
    pub fn full_scale() -> Self {
        Self {
            sample_rate: 100e6,
            pri: 409.6e-6,
            pulses_per_cpi: 1000,
            pulse_width: 20.48e-6,
            n_subbands: 5,
        }
    }

    /// Decimated scale for fast test suites: 25 Msps, 64-pulse CPIs.
    pub fn desk_scale() -> Self {
        Self {
            sample_rate: 25e6,
            pri: 409.6e-6,
            pulses_per_cpi: 64,
            pulse_width: 20.48e-6,
            n_subbands: 5,
        }
    }

    pub fn validate(&self) -> Result<(), DspError> {
        if !(self.sample_rate > 0.0) {
            return Err(DspError::InvalidConfig("sample_rate must be positive".into()));
        }
        if !(self.pri > 0.0) {
            return Err(DspError::InvalidConfig("pri must be positive".into()));
        }
        if !(self.pulse_width > 0.0 && self.pulse_width < self.pri) {
            return Err(DspError::InvalidConfig(
                "pulse_width must be positive and less than the pri".into(),
            ));
        }
        if self.pulses_per_cpi < 2 {
            return Err(DspError::InvalidConfig("pulses_per_cpi must be >= 2".into()));
        }
        if self.n_subbands == 0 {
            return Err(DspError::InvalidConfig("n_subbands must be >= 1".into()));
        }
        if self.samples_per_pulse() == 0 {
            return Err(DspError::InvalidConfig("pulse_width shorter than one sample".into()));
        }
        Ok(())
    }

    pub fn subband_bandwidth(&self) -> f64 {
        self.sample_rate / self.n_subbands as f64
    }

    pub fn samples_per_pri(&self) -> usize {
        (self.pri * self.sample_rate).round() as usize
    }

    pub fn samples_per_pulse(&self) -> usize {
        (self.pulse_width * self.sample_rate).round() as usize
    }

    /// Doppler bin spacing, 1 / (K * PRI).
    pub fn doppler_resolution(&self) -> f64 {
        1.0 / (self.pulses_per_cpi as f64 * self.pri)
    }
}

/// Point-target scene over one CPI. Interference occupies whole sub-bands
/// according to the per-pulse occupancy stream handed to the synthesizer,
/// at `interference_power` per occupied band.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Scene {
    /// Two-way target delay in seconds.
    pub target_delay: f64,
    /// Target Doppler shift in Hz.
    pub target_doppler: f64,
    /// Linear echo amplitude at the receiver.
    pub target_amplitude: f64,
    /// Complex white Gaussian noise power per sample.
    pub noise_power: f64,
    /// Time-averaged interference power per occupied sub-band.
    pub interference_power: f64,
}

impl Default for Scene {
    fn default() -> Self {
        Self {
            target_delay: 80e-6,
            target_doppler: 2_000.0,
            target_amplitude: 0.05,
            noise_power: 1.0,
            interference_power: 1_000.0,
        }
    }
}

impl Scene {
    pub fn validate(&self, cfg: &RadarConfig) -> Result<(), DspError> {
        if self.target_delay < 0.0 || self.target_delay >= cfg.pri {
            return Err(DspError::DelayBeyondPri { delay_s: self.target_delay, pri_s: cfg.pri });
        }
        let delay_samples = (self.target_delay * cfg.sample_rate).round() as usize;
        if delay_samples + cfg.samples_per_pulse() > cfg.samples_per_pri() {
            return Err(DspError::InvalidConfig(
                "target echo would run past the end of the PRI".into(),
            ));
        }
        for (name, v) in [
            ("target_amplitude", self.target_amplitude),
            ("noise_power", self.noise_power),
            ("interference_power", self.interference_power),
        ] {
            if v < 0.0 {
                return Err(DspError::InvalidConfig(format!("{name} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Range bin of the matched-filter peak.
    pub fn target_range_bin(&self, cfg: &RadarConfig) -> usize {
        (self.target_delay * cfg.sample_rate).round() as usize
    }

    /// Doppler bin of the target after the slow-time DFT (unshifted
    /// spectrum: negative Doppler wraps to the high bins).
    pub fn target_doppler_bin(&self, cfg: &RadarConfig) -> usize {
        let k = cfg.pulses_per_cpi as f64;
        let bin = (self.target_doppler * k * cfg.pri).round() as i64;
        bin.rem_euclid(cfg.pulses_per_cpi as i64) as usize
    }
}
