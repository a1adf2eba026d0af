//! Experiment orchestration for the spectrum-sharing radar simulator:
//! config ingestion with scale presets, the offline-train /
//! online-evaluate / detect pipeline for every algorithm, coexistence
//! metrics, and deterministic CSV/JSON export.

pub mod compare;
pub mod config;
pub mod error;
pub mod experiment;
pub mod seed;
pub mod sharing;

pub use compare::{compare_algorithms, write_comparison_csv, ComparisonRow};
pub use config::{DetectionConfig, ExperimentConfig, Scale, SourceSpec};
pub use error::HarnessError;
pub use experiment::{
    detection_pass, final_quartile_mean, run_experiment, run_in_memory, RunSummary,
};
pub use seed::{derive_seed, derive_seed_indexed};
pub use sharing::{compute_sharing_report, SharingReport};
