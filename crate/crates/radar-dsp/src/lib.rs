//! Signal-level scoring of waveform choices: LFM chirp synthesis over
//! selected sub-bands, point-target CPI simulation with band-limited
//! interference, pulse compression, range-Doppler map formation,
//! CA-CFAR detection, and PD/FA-rate ROC computation.

pub mod cfar;
pub mod chirp;
pub mod compress;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod roc;

pub use cfar::{ca_cfar, cfar_threshold_factor, CfarConfig};
pub use chirp::{action_bandwidth, band_bins, lfm_chirp};
pub use compress::{matched_filter, range_doppler, RangeDopplerMap};
pub use config::{RadarConfig, Scene};
pub use error::DspError;
pub use pipeline::{synthesize_cpi, CpiProcessor, PulseMatrix};
pub use roc::{roc_curve, score_cpi, CpiScore, RocPoint};
