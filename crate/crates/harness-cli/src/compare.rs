use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use agents::Algorithm;

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::experiment::{run_in_memory, RunSummary};

/// One algorithm's seed-averaged results.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub n_seeds: usize,
    pub final_quartile_mean_reward: f64,
    pub first_online_mean_reward: f64,
    pub pd_at_reference_pfa: f64,
    pub mean_collisions: f64,
    pub mean_missed_opportunities: f64,
    pub mean_pct_adapt: f64,
}

/// Runs `base` once per (algorithm, seed), in parallel, and averages each
/// algorithm's results over the seeds. Rows come back sorted by
/// algorithm name so the output is stable.
pub fn compare_algorithms(
    base: &ExperimentConfig,
    algorithms: &[Algorithm],
    seeds: &[u64],
) -> Result<Vec<ComparisonRow>, HarnessError> {
    let runs: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| seeds.iter().map(move |&s| (a, s)))
        .collect();
    let summaries: Vec<RunSummary> = runs
        .par_iter()
        .map(|&(algorithm, seed)| {
            let mut cfg = base.clone();
            cfg.agent.algorithm = algorithm;
            cfg.seed = seed;
            run_in_memory(&cfg)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(algorithms.len());
    for &algorithm in algorithms {
        let of_alg: Vec<&RunSummary> =
            summaries.iter().filter(|s| s.algorithm == algorithm).collect();
        let n = of_alg.len() as f64;
        let mean = |f: &dyn Fn(&RunSummary) -> f64| of_alg.iter().map(|s| f(s)).sum::<f64>() / n;
        rows.push(ComparisonRow {
            algorithm,
            n_seeds: of_alg.len(),
            final_quartile_mean_reward: mean(&|s| s.final_quartile_mean),
            first_online_mean_reward: mean(&|s| s.first_online_mean),
            pd_at_reference_pfa: mean(&|s| s.pd_at_reference_pfa),
            mean_collisions: mean(&|s| s.sharing.n_collisions as f64),
            mean_missed_opportunities: mean(&|s| s.sharing.n_missed_opportunities as f64),
            mean_pct_adapt: mean(&|s| s.sharing.pct_waveform_adapt),
        });
    }
    rows.sort_by(|a, b| a.algorithm.name().cmp(b.algorithm.name()));
    Ok(rows)
}

pub fn write_comparison_csv(path: &Path, rows: &[ComparisonRow]) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    writeln!(
        f,
        "algorithm,n_seeds,final_quartile_mean_reward,first_online_mean_reward,\
         pd_at_reference_pfa,mean_collisions,mean_missed_opportunities,mean_pct_adapt"
    )?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.n_seeds,
            r.final_quartile_mean_reward,
            r.first_online_mean_reward,
            r.pd_at_reference_pfa,
            r.mean_collisions,
            r.mean_missed_opportunities,
            r.mean_pct_adapt
        )?;
    }
    Ok(())
}
