use std::f64::consts::PI;

use num_complex::Complex64;
use spectrum_env::RadarAction;

use crate::config::RadarConfig;

/// Baseband LFM chirp sweeping exactly the action's contiguous sub-bands.
///
/// Sub-band i covers `[i*B_sub - fs/2, (i+1)*B_sub - fs/2)`, so the chirp
/// for bands `lo..=hi` sweeps linearly from the lower edge of `lo` to the
/// upper edge of `hi` over one pulse width, at unit amplitude.
pub fn lfm_chirp(action: &RadarAction, cfg: &RadarConfig) -> Vec<Complex64> {
    let b_sub = cfg.subband_bandwidth();
    let f_start = action.lo() as f64 * b_sub - cfg.sample_rate / 2.0;
    let f_stop = (action.hi() + 1) as f64 * b_sub - cfg.sample_rate / 2.0;
    let duration = cfg.pulse_width;
    let sweep_rate = (f_stop - f_start) / duration;
    let n = cfg.samples_per_pulse();
    let dt = 1.0 / cfg.sample_rate;
    (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            let phase = 2.0 * PI * (f_start * t + 0.5 * sweep_rate * t * t);
            Complex64::from_polar(1.0, phase)
        })
        .collect()
}

/// Occupied bandwidth of an action in Hz.
pub fn action_bandwidth(action: &RadarAction, cfg: &RadarConfig) -> f64 {
    action.width() as f64 * cfg.subband_bandwidth()
}

/// FFT bin ranges (over an `fft_len`-point spectrum) covered by one
/// sub-band. Frequencies map to bins as `round(f / fs * L)` with negative
/// frequencies wrapped to the upper half.
pub fn band_bins(band: usize, fft_len: usize, cfg: &RadarConfig) -> Vec<usize> {
    let b_sub = cfg.subband_bandwidth();
    let f_lo = band as f64 * b_sub - cfg.sample_rate / 2.0;
    let f_hi = (band + 1) as f64 * b_sub - cfg.sample_rate / 2.0;
    let l = fft_len as f64;
    let lo = (f_lo / cfg.sample_rate * l).round() as i64;
    let hi = (f_hi / cfg.sample_rate * l).round() as i64;
    (lo..hi).map(|k| k.rem_euclid(fft_len as i64) as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rustfft::FftPlanner;

    fn full_band_action(cfg: &RadarConfig) -> RadarAction {
        RadarAction::full_band(cfg.n_subbands)
    }

    #[test]
    fn time_bandwidth_product_of_the_full_band() {
        // 100 MHz sweep over 10 us: BT = 1000.
        let cfg = RadarConfig { pulse_width: 10e-6, ..RadarConfig::full_scale() };
        let action = full_band_action(&cfg);
        let bt = action_bandwidth(&action, &cfg) * cfg.pulse_width;
        assert!((bt - 1000.0).abs() < 1e-9);
        assert_eq!(lfm_chirp(&action, &cfg).len(), 1000);
    }

    #[test]
    fn single_subband_spans_twenty_megahertz() {
        let cfg = RadarConfig::full_scale();
        let action = RadarAction::new(2, 2, 5).unwrap();
        assert_eq!(action_bandwidth(&action, &cfg), 20e6);
    }

    #[test]
    fn chirp_has_unit_amplitude() {
        let cfg = RadarConfig::desk_scale();
        let action = RadarAction::new(1, 3, 5).unwrap();
        for s in lfm_chirp(&action, &cfg) {
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_mass_outside_the_selected_band_is_low() {
        // Periodogram check at full scale: outside the swept band (with a
        // small transition margin) every bin sits at least 13 dB below the
        // peak, the unwindowed sinc-skirt level.
        let cfg = RadarConfig::full_scale();
        for (lo, hi) in [(0, 4), (1, 2), (3, 3), (0, 1)] {
            let action = RadarAction::new(lo, hi, 5).unwrap();
            let chirp = lfm_chirp(&action, &cfg);
            let fft_len = 8192;
            let mut buf: Vec<Complex64> = chirp.clone();
            buf.resize(fft_len, Complex64::new(0.0, 0.0));
            FftPlanner::new().plan_fft_forward(fft_len).process(&mut buf);
            let psd: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();
            let peak = psd.iter().copied().fold(0.0, f64::max);

            let b_sub = cfg.subband_bandwidth();
            let margin = 0.05 * action_bandwidth(&action, &cfg);
            let f_lo = lo as f64 * b_sub - cfg.sample_rate / 2.0 - margin;
            let f_hi = (hi + 1) as f64 * b_sub - cfg.sample_rate / 2.0 + margin;
            let threshold = peak * 10f64.powf(-13.0 / 10.0);
            // The sampled spectrum is circular: a band edge at -fs/2 leaks
            // across the Nyquist boundary, so membership is tested mod fs.
            let in_band = |f: f64| {
                [-cfg.sample_rate, 0.0, cfg.sample_rate]
                    .iter()
                    .any(|shift| f + shift >= f_lo && f + shift <= f_hi)
            };
            for (k, &p) in psd.iter().enumerate() {
                let mut f = k as f64 / fft_len as f64 * cfg.sample_rate;
                if f >= cfg.sample_rate / 2.0 {
                    f -= cfg.sample_rate;
                }
                if !in_band(f) {
                    assert!(
                        p <= threshold,
                        "action ({lo},{hi}): out-of-band bin at {f:.1} Hz is {:.1} dB",
                        10.0 * (p / peak).log10()
                    );
                }
            }
        }
    }

    #[test]
    fn band_bins_tile_the_spectrum() {
        let cfg = RadarConfig::desk_scale();
        let fft_len = 1000;
        let mut all: Vec<usize> = (0..5).flat_map(|b| band_bins(b, fft_len, &cfg)).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), fft_len);
    }
}
