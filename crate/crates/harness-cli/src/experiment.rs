use std::fs;
use std::io::Write;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use agents::{offline_train, online_evaluate, Agent, Algorithm, EpochStats};
use radar_dsp::{ca_cfar, roc_curve, score_cpi, CpiProcessor, CpiScore, RocPoint};
use spectrum_env::{Environment, OccupancyVector, RadarAction};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::seed::{derive_seed, derive_seed_indexed};
use crate::sharing::{compute_sharing_report, SharingReport};

/// All results of one experiment run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub offline_stats: Vec<EpochStats>,
    pub online_stats: Vec<EpochStats>,
    pub sharing: SharingReport,
    pub roc: Vec<RocPoint>,
    pub first_online_mean: f64,
    pub final_quartile_mean: f64,
    pub reference_pfa: f64,
    pub pd_at_reference_pfa: f64,
}

/// Mean reward of the final quarter of epochs.
pub fn final_quartile_mean(stats: &[EpochStats]) -> f64 {
    let quartile = (stats.len() / 4).max(1);
    let tail = &stats[stats.len() - quartile..];
    tail.iter().map(|s| s.mean_reward).sum::<f64>() / tail.len() as f64
}

/// Trains, evaluates, and scores one configuration without touching the
/// filesystem.
pub fn run_in_memory(config: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    config.validate()?;
    let mut agent = Agent::new(
        config.agent.clone(),
        &config.env,
        derive_seed(config.seed, "agent"),
    )?;

    let mut train_env = Environment::new(
        config.env.clone(),
        config.interference_train.build()?,
        derive_seed(config.seed, "env-train"),
    )?;
    let offline_stats = offline_train(&mut agent, &mut train_env)?;

    let mut eval_env = Environment::new(
        config.env.clone(),
        config.interference_eval.build()?,
        derive_seed(config.seed, "env-eval"),
    )?;
    let log = online_evaluate(&mut agent, &mut eval_env)?;

    let sharing =
        compute_sharing_report(&log.actions, &log.truth_occupancy, config.sharing_window)?;
    let roc = detection_pass(config, &log.actions, &log.truth_occupancy)?;

    let reference_pfa = config.detection.reference_pfa();
    let pd_at_reference_pfa = roc
        .iter()
        .find(|p| p.pfa_theoretical == reference_pfa)
        .map(|p| p.pd_rate)
        .unwrap_or(f64::NAN);
    Ok(RunSummary {
        algorithm: config.agent.algorithm,
        seed: config.seed,
        first_online_mean: log.stats.first().map(|s| s.mean_reward).unwrap_or(0.0),
        final_quartile_mean: final_quartile_mean(&log.stats),
        offline_stats,
        online_stats: log.stats,
        sharing,
        roc,
        reference_pfa,
        pd_at_reference_pfa,
    })
}

/// Drives the radar-signal pipeline with the tail of the evaluated
/// action stream: the last `n_cpis` CPIs are synthesized against the
/// occupancy the agent actually experienced, CFAR-detected at each
/// theoretical pfa, and folded into an ROC. CPIs are processed in
/// parallel with per-CPI derived seeds and merged by index.
pub fn detection_pass(
    config: &ExperimentConfig,
    actions: &[RadarAction],
    occupancy: &[OccupancyVector],
) -> Result<Vec<RocPoint>, HarnessError> {
    if config.detection.n_cpis == 0 {
        return Ok(Vec::new());
    }
    let pulses = config.radar.pulses_per_cpi;
    let needed = config.detection.n_cpis * pulses;
    if actions.len() < needed || occupancy.len() < needed {
        return Err(HarnessError::Misaligned(format!(
            "detection pass needs {needed} decisions, streams hold {}",
            actions.len().min(occupancy.len())
        )));
    }
    let start = actions.len() - needed;
    let actions = &actions[start..];
    let occupancy = &occupancy[start..];
    let truth = (
        config.scene.target_range_bin(&config.radar),
        config.scene.target_doppler_bin(&config.radar),
    );

    let per_cpi: Vec<Vec<CpiScore>> = (0..config.detection.n_cpis)
        .into_par_iter()
        .map(|cpi| -> Result<Vec<CpiScore>, HarnessError> {
            let mut processor = CpiProcessor::new(config.radar.clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed_indexed(
                config.seed,
                "cpi",
                cpi as u64,
            ));
            let span = cpi * pulses..(cpi + 1) * pulses;
            let map = processor.process(
                &actions[span.clone()],
                &occupancy[span],
                &config.scene,
                &mut rng,
            )?;
            config
                .detection
                .pfa
                .iter()
                .map(|&pfa| {
                    let detections = ca_cfar(&map, &config.detection.cfar(pfa))?;
                    Ok(score_cpi(&detections, truth, map.cols()))
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let scores_per_pfa: Vec<(f64, Vec<CpiScore>)> = config
        .detection
        .pfa
        .iter()
        .enumerate()
        .map(|(i, &pfa)| (pfa, per_cpi.iter().map(|scores| scores[i]).collect()))
        .collect();
    let n_cells = config.radar.samples_per_pri() * pulses;
    Ok(roc_curve(&scores_per_pfa, n_cells))
}

/// Filesystem layer over [`run_in_memory`]: epoch CSVs, the ROC CSV, the
/// sharing JSON, and a `run.json` echoing the full config and seed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let summary = run_in_memory(config)?;
    fs::create_dir_all(&config.output_dir)?;
    let dir = &config.output_dir;

    write_epochs_csv(&dir.join("epochs_offline.csv"), &summary.offline_stats)?;
    write_epochs_csv(&dir.join("epochs_online.csv"), &summary.online_stats)?;
    write_roc_csv(&dir.join("roc.csv"), &summary.roc)?;
    fs::write(
        dir.join("sharing.json"),
        serde_json::to_string_pretty(&summary.sharing)? + "\n",
    )?;

    #[derive(Serialize)]
    struct RunRecord<'a> {
        config: &'a ExperimentConfig,
        first_online_mean: f64,
        final_quartile_mean: f64,
        reference_pfa: f64,
        pd_at_reference_pfa: f64,
        outputs: Vec<PathBuf>,
    }
    let record = RunRecord {
        config,
        first_online_mean: summary.first_online_mean,
        final_quartile_mean: summary.final_quartile_mean,
        reference_pfa: summary.reference_pfa,
        pd_at_reference_pfa: summary.pd_at_reference_pfa,
        outputs: ["epochs_offline.csv", "epochs_online.csv", "roc.csv", "sharing.json"]
            .iter()
            .map(PathBuf::from)
            .collect(),
    };
    fs::write(dir.join("run.json"), serde_json::to_string_pretty(&record)? + "\n")?;
    Ok(summary)
}

fn write_epochs_csv(path: &std::path::Path, stats: &[EpochStats]) -> Result<(), HarnessError> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "epoch,mean_reward,collisions,missed,adaptations")?;
    for s in stats {
        writeln!(
            f,
            "{},{},{},{},{}",
            s.epoch, s.mean_reward, s.collisions, s.missed_opportunities, s.adaptations
        )?;
    }
    Ok(())
}

fn write_roc_csv(path: &std::path::Path, roc: &[RocPoint]) -> Result<(), HarnessError> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "pfa_theoretical,pd_rate,fa_rate")?;
    for p in roc {
        writeln!(f, "{},{},{}", p.pfa_theoretical, p.pd_rate, p.fa_rate)?;
    }
    Ok(())
}
