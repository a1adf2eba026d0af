use serde::Serialize;

use spectrum_env::{count_collisions, missed_opportunities, OccupancyVector, RadarAction};

use crate::error::HarnessError;

/// Coexistence metrics over a window of decisions: collision and
/// missed-opportunity slot counts plus the waveform-adaptation
/// percentage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharingReport {
    pub n_collisions: usize,
    pub n_missed_opportunities: usize,
    pub n_adaptations: usize,
    pub pct_waveform_adapt: f64,
    pub window: usize,
}

/// Tallies the final `window` decisions of aligned action/occupancy
/// streams. A collision is an occupied slot the radar transmitted in, a
/// missed opportunity an open slot it left unused, and an adaptation any
/// step whose action differs from its predecessor within the window.
pub fn compute_sharing_report(
    actions: &[RadarAction],
    occupancy: &[OccupancyVector],
    window: usize,
) -> Result<SharingReport, HarnessError> {
    if actions.len() != occupancy.len() {
        return Err(HarnessError::Misaligned(format!(
            "{} actions vs {} occupancy rows",
            actions.len(),
            occupancy.len()
        )));
    }
    if actions.len() < window || window == 0 {
        return Err(HarnessError::Misaligned(format!(
            "window {window} over streams of length {}",
            actions.len()
        )));
    }
    let start = actions.len() - window;
    let actions = &actions[start..];
    let occupancy = &occupancy[start..];

    let mut n_collisions = 0;
    let mut n_missed = 0;
    let mut n_adaptations = 0;
    for (t, (action, occ)) in actions.iter().zip(occupancy).enumerate() {
        n_collisions += count_collisions(action, occ)?;
        n_missed += missed_opportunities(action, occ)?;
        if t > 0 && actions[t - 1] != *action {
            n_adaptations += 1;
        }
    }
    Ok(SharingReport {
        n_collisions,
        n_missed_opportunities: n_missed,
        n_adaptations,
        pct_waveform_adapt: 100.0 * n_adaptations as f64 / window as f64,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectrum_env::OccupancyVector;

    fn occ(bands: &[usize]) -> OccupancyVector {
        OccupancyVector::from_occupied(5, bands).unwrap()
    }

    #[test]
    fn complement_matching_radar_scores_clean() {
        let occupancy = vec![occ(&[3, 4]); 10];
        let actions = vec![RadarAction::new(0, 2, 5).unwrap(); 10];
        let report = compute_sharing_report(&actions, &occupancy, 10).unwrap();
        assert_eq!(report.n_collisions, 0);
        assert_eq!(report.n_missed_opportunities, 0);
        assert_eq!(report.n_adaptations, 0);
        assert_eq!(report.pct_waveform_adapt, 0.0);
    }

    #[test]
    fn table_percentage_arithmetic() {
        // 43 adaptations in a 101-decision window: 42.57%.
        let mut actions = Vec::new();
        let a = RadarAction::new(0, 0, 5).unwrap();
        let b = RadarAction::new(1, 1, 5).unwrap();
        for t in 0..101 {
            // Alternate for the first 86 steps to produce exactly 43 changes
            // relative to the in-window predecessor.
            actions.push(if t <= 43 && t % 2 == 1 { b.clone() } else { a.clone() });
        }
        let changes = actions.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 43);
        let occupancy = vec![occ(&[]); 101];
        let report = compute_sharing_report(&actions, &occupancy, 101).unwrap();
        assert_eq!(report.n_adaptations, 43);
        assert!((report.pct_waveform_adapt - 4300.0 / 101.0).abs() < 1e-12);
        assert_eq!(format!("{:.2}", report.pct_waveform_adapt), "42.57");
    }

    #[test]
    fn fixed_narrow_radar_misses_open_slots() {
        let occupancy = vec![occ(&[3, 4]); 7];
        let actions = vec![RadarAction::new(0, 0, 5).unwrap(); 7];
        let report = compute_sharing_report(&actions, &occupancy, 7).unwrap();
        // Bands 1 and 2 stay open and unused every step.
        assert_eq!(report.n_missed_opportunities, 14);
        assert_eq!(report.n_collisions, 0);
    }

    #[test]
    fn window_takes_the_final_decisions() {
        let a = RadarAction::full_band(5);
        let b = RadarAction::new(0, 0, 5).unwrap();
        // Early collisions fall outside the window.
        let actions = vec![a.clone(), a.clone(), b.clone(), b.clone()];
        let occupancy =
            vec![occ(&[0]), occ(&[0]), occ(&[]), occ(&[])];
        let report = compute_sharing_report(&actions, &occupancy, 2).unwrap();
        assert_eq!(report.n_collisions, 0);
        assert_eq!(report.n_adaptations, 0);
    }

    #[test]
    fn misaligned_streams_are_rejected() {
        let actions = vec![RadarAction::full_band(5); 3];
        let occupancy = vec![occ(&[]); 2];
        assert!(compute_sharing_report(&actions, &occupancy, 2).is_err());
        let occupancy = vec![occ(&[]); 3];
        assert!(compute_sharing_report(&actions, &occupancy, 5).is_err());
    }

    #[test]
    fn accounting_identity_against_brute_force() {
        // collisions + missed + used-open + avoided-occupied = window * N,
        // recounted by a straight double loop over bits.
        let patterns: Vec<OccupancyVector> =
            (0..32).map(|i| occ(&[(i % 5), ((i * 3) % 5)])).collect();
        let actions: Vec<RadarAction> =
            (0..32).map(|i| RadarAction::new(i % 3, (i % 3) + (i % 2), 5).unwrap()).collect();
        let window = 20;
        let report = compute_sharing_report(&actions, &patterns, window).unwrap();

        let start = actions.len() - window;
        let mut collisions = 0usize;
        let mut missed = 0usize;
        let mut used_open = 0usize;
        let mut avoided_occupied = 0usize;
        for t in start..actions.len() {
            for band in 0..5 {
                let transmit = actions[t].mask().occupied(band);
                let busy = patterns[t].occupied(band);
                match (transmit, busy) {
                    (true, true) => collisions += 1,
                    (false, false) => missed += 1,
                    (true, false) => used_open += 1,
                    (false, true) => avoided_occupied += 1,
                }
            }
        }
        assert_eq!(report.n_collisions, collisions);
        assert_eq!(report.n_missed_opportunities, missed);
        assert_eq!(
            collisions + missed + used_open + avoided_occupied,
            window * 5
        );
    }
}
