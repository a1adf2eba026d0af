use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use agents::Algorithm;
use harness_cli::{
    compare_algorithms, run_experiment, write_comparison_csv, ExperimentConfig, Scale,
};

#[derive(Parser)]
#[command(
    name = "specshare",
    about = "Cognitive-radar spectrum-sharing simulator: RL waveform selection with detection scoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment: offline training, online evaluation, detection
    /// pass, and CSV/JSON export.
    Run {
        /// TOML experiment config; defaults apply for missing sections.
        #[arg(long)]
        config: Option<PathBuf>,
        /// policy_iteration | dqn | ddqn | drqn | saa | random
        #[arg(long)]
        algorithm: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// desk | full
        #[arg(long)]
        scale: Option<String>,
        /// Output directory for the artifact bundle.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several algorithms over a seed sweep and write a ranked
    /// comparison table.
    Compare {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated list, e.g. dqn,ddqn,drqn,saa
        #[arg(long, default_value = "policy_iteration,dqn,ddqn,drqn,saa")]
        algorithms: String,
        /// Comma list (1,2,3) or half-open range (0..10).
        #[arg(long, default_value = "0..5")]
        seeds: String,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo.trim().parse().context("bad seed range start")?;
        let hi: u64 = hi.trim().parse().context("bad seed range end")?;
        if hi <= lo {
            bail!("empty seed range {spec:?}");
        }
        return Ok((lo..hi).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<u64>().with_context(|| format!("bad seed {s:?}")))
        .collect()
}

fn base_config(
    config: &Option<PathBuf>,
    algorithm: &Option<String>,
    seed: Option<u64>,
    scale: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let scale = match scale.as_deref() {
                Some(s) => s.parse::<Scale>().map_err(anyhow::Error::msg)?,
                None => Scale::Desk,
            };
            ExperimentConfig::preset(scale, Algorithm::Dqn, 0)
        }
    };
    if let Some(name) = algorithm {
        cfg.agent.algorithm = name.parse::<Algorithm>().map_err(anyhow::Error::msg)?;
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if config.is_some() {
        if let Some(s) = scale.as_deref() {
            // A scale flag on top of a config file re-applies the preset's
            // radar timing and CPI length.
            let scale: Scale = s.parse().map_err(anyhow::Error::msg)?;
            let preset = ExperimentConfig::preset(scale, cfg.agent.algorithm, cfg.seed);
            cfg.scale = scale;
            cfg.radar = preset.radar;
            cfg.env.cpi_pulses = preset.env.cpi_pulses;
        }
    }
    if let Some(dir) = out {
        cfg.output_dir = dir.clone();
    }
    Ok(cfg)
}

fn real_main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, algorithm, seed, scale, out } => {
            let cfg = base_config(&config, &algorithm, seed, &scale, &out)?;
            let summary = run_experiment(&cfg)?;
            println!(
                "{} seed {}: final-quartile reward {:.3}, PD {:.3} @ pfa {:.0e}, \
                 collisions {}, missed {}, adapt {:.2}%",
                summary.algorithm,
                summary.seed,
                summary.final_quartile_mean,
                summary.pd_at_reference_pfa,
                summary.reference_pfa,
                summary.sharing.n_collisions,
                summary.sharing.n_missed_opportunities,
                summary.sharing.pct_waveform_adapt
            );
            println!("artifacts in {}", cfg.output_dir.display());
        }
        Command::Compare { config, algorithms, seeds, scale, out } => {
            let cfg = base_config(&config, &None, None, &scale, &out)?;
            let algorithms: Vec<Algorithm> = algorithms
                .split(',')
                .map(|s| s.trim().parse::<Algorithm>().map_err(anyhow::Error::msg))
                .collect::<Result<_>>()?;
            let seeds = parse_seeds(&seeds)?;
            let rows = compare_algorithms(&cfg, &algorithms, &seeds)?;
            let path = cfg.output_dir.join("comparison.csv");
            write_comparison_csv(&path, &rows)?;
            println!(
                "{:<18} {:>8} {:>10} {:>8} {:>8} {:>8}",
                "algorithm", "reward", "pd", "coll", "missed", "adapt%"
            );
            for r in &rows {
                println!(
                    "{:<18} {:>8.2} {:>10.3} {:>8.1} {:>8.1} {:>8.2}",
                    r.algorithm.name(),
                    r.final_quartile_mean_reward,
                    r.pd_at_reference_pfa,
                    r.mean_collisions,
                    r.mean_missed_opportunities,
                    r.mean_pct_adapt
                );
            }
            println!("table written to {}", path.display());
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = real_main() {
        // Machine-readable error line, nonzero exit.
        eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
        std::process::exit(1);
    }
}
