use serde::Serialize;

/// Per-CPI detection outcome: whether the target was missed, and how many
/// detections fell outside the truth window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CpiScore {
    /// 1 when no detection landed within the truth window, else 0.
    pub md: u32,
    /// False alarms: detections outside the truth window.
    pub fa: usize,
}

/// Scores one CPI's detections against the true target cell. A detection
/// within one bin of the truth in both dimensions counts as the target;
/// the Doppler axis wraps (it is a DFT axis), range does not.
pub fn score_cpi(
    detections: &[(usize, usize)],
    truth: (usize, usize),
    doppler_bins: usize,
) -> CpiScore {
    let (tr, td) = truth;
    let mut hit = false;
    let mut fa = 0usize;
    for &(r, d) in detections {
        let range_ok = r.abs_diff(tr) <= 1;
        let dd = d.abs_diff(td);
        let doppler_ok = dd <= 1 || dd >= doppler_bins - 1;
        if range_ok && doppler_ok {
            hit = true;
        } else {
            fa += 1;
        }
    }
    CpiScore { md: u32::from(!hit), fa }
}

/// One operating point of the receiver operating characteristic.
#[derive(Debug, Clone, Serialize)]
pub struct RocPoint {
    pub pfa_theoretical: f64,
    /// 1 - (1/N) sum MD_j.
    pub pd_rate: f64,
    /// (1 / (N * N_p)) sum FA_j.
    pub fa_rate: f64,
    pub n_cpis: usize,
    pub md_counts: Vec<u32>,
    pub fa_counts: Vec<usize>,
}

/// Folds per-CPI scores into one ROC point per theoretical pfa.
/// `n_cells` is N_p, the number of points in one range-Doppler map.
pub fn roc_curve(scores_per_pfa: &[(f64, Vec<CpiScore>)], n_cells: usize) -> Vec<RocPoint> {
    scores_per_pfa
        .iter()
        .map(|(pfa, scores)| {
            let n = scores.len();
            let md_sum: u32 = scores.iter().map(|s| s.md).sum();
            let fa_sum: usize = scores.iter().map(|s| s.fa).sum();
            RocPoint {
                pfa_theoretical: *pfa,
                pd_rate: 1.0 - md_sum as f64 / n as f64,
                fa_rate: fa_sum as f64 / (n as f64 * n_cells as f64),
                n_cpis: n,
                md_counts: scores.iter().map(|s| s.md).collect(),
                fa_counts: scores.iter().map(|s| s.fa).collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_hit_scores_clean() {
        let score = score_cpi(&[(10, 5)], (10, 5), 64);
        assert_eq!(score, CpiScore { md: 0, fa: 0 });
    }

    #[test]
    fn no_detections_is_a_miss() {
        let score = score_cpi(&[], (10, 5), 64);
        assert_eq!(score, CpiScore { md: 1, fa: 0 });
    }

    #[test]
    fn spurious_detections_count_as_false_alarms() {
        let detections = [(10, 5), (40, 2), (3, 60), (11, 6)];
        let score = score_cpi(&detections, (10, 5), 64);
        assert_eq!(score, CpiScore { md: 0, fa: 2 });
    }

    #[test]
    fn doppler_window_wraps_around() {
        let score = score_cpi(&[(10, 63)], (10, 0), 64);
        assert_eq!(score.md, 0);
        let score = score_cpi(&[(10, 62)], (10, 0), 64);
        assert_eq!(score.md, 1);
    }

    #[test]
    fn roc_rates_follow_the_counting_rules() {
        // 5 misses out of 500 CPIs: PD = 0.99.
        let scores: Vec<CpiScore> = (0..500)
            .map(|j| CpiScore { md: u32::from(j < 5), fa: 0 })
            .collect();
        let points = roc_curve(&[(1e-3, scores)], 1000);
        assert!((points[0].pd_rate - 0.99).abs() < 1e-12);
        assert_eq!(points[0].fa_rate, 0.0);
        assert_eq!(points[0].n_cpis, 500);
    }

    #[test]
    fn saturated_false_alarms_hit_rate_one() {
        let n_cells = 100;
        let scores = vec![CpiScore { md: 0, fa: n_cells }; 4];
        let points = roc_curve(&[(1e-2, scores)], n_cells);
        assert_eq!(points[0].fa_rate, 1.0);
        assert_eq!(points[0].pd_rate, 1.0);
    }
}
