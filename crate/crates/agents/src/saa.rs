use spectrum_env::{OccupancyVector, RadarAction};

/// Sense-and-avoid: transmit in the largest contiguous open block of the
/// latest sensed occupancy, ties broken toward the lowest start band.
/// When every band is occupied the radar still has to transmit each PRI,
/// so it falls back to the single band at index 0.
pub fn saa_action(occupancy: &OccupancyVector) -> RadarAction {
    let n = occupancy.len();
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for i in 0..=n {
        let open = i < n && !occupancy.occupied(i);
        match (open, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                let candidate = (start, i - 1);
                let width = |(lo, hi): (usize, usize)| hi - lo + 1;
                if best.map_or(true, |b| width(candidate) > width(b)) {
                    best = Some(candidate);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let (lo, hi) = best.unwrap_or((0, 0));
    RadarAction::new(lo, hi, n).expect("block is inside the band")
}
