use crate::error::EnvError;
use crate::occupancy::OccupancyVector;

/// A contiguous sub-band transmit mask: the radar chirps across bands
/// `lo..=hi` and nowhere else.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadarAction {
    lo: usize,
    hi: usize,
    mask: OccupancyVector,
}

impl RadarAction {
    pub fn new(lo: usize, hi: usize, n_subbands: usize) -> Result<Self, EnvError> {
        if n_subbands == 0 {
            return Err(EnvError::InvalidConfig("n_subbands must be >= 1".into()));
        }
        if lo > hi || hi >= n_subbands {
            return Err(EnvError::InvalidAction(format!(
                "interval [{lo}, {hi}] not contained in 0..{n_subbands}"
            )));
        }
        let bits = (0..n_subbands).map(|i| i >= lo && i <= hi).collect();
        Ok(Self { lo, hi, mask: OccupancyVector::new(bits) })
    }

    /// The widest action: transmit across the whole spectrum.
    pub fn full_band(n_subbands: usize) -> Self {
        Self::new(0, n_subbands - 1, n_subbands).expect("n_subbands >= 1")
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn mask(&self) -> &OccupancyVector {
        &self.mask
    }

    pub fn n_subbands(&self) -> usize {
        self.mask.len()
    }

    /// Number of sub-bands used, N_SB.
    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Position of this action in the canonical `(lo, hi)`-sorted order.
    pub fn index(&self) -> usize {
        let n = self.n_subbands();
        // Actions with lower bound l occupy a row of n - l entries.
        let before: usize = (0..self.lo).map(|l| n - l).sum();
        before + (self.hi - self.lo)
    }

    /// Inverse of [`RadarAction::index`].
    pub fn from_index(index: usize, n_subbands: usize) -> Result<Self, EnvError> {
        let total = action_count(n_subbands);
        if index >= total {
            return Err(EnvError::InvalidAction(format!(
                "action index {index} out of range (total {total})"
            )));
        }
        let mut lo = 0;
        let mut remaining = index;
        while remaining >= n_subbands - lo {
            remaining -= n_subbands - lo;
            lo += 1;
        }
        Self::new(lo, lo + remaining, n_subbands)
    }
}

/// N(N+1)/2: how many contiguous intervals fit in N sub-bands.
pub fn action_count(n_subbands: usize) -> usize {
    n_subbands * (n_subbands + 1) / 2
}

/// Enumerates every contiguous transmit interval, sorted by `(lo, hi)`.
pub fn enumerate_actions(n_subbands: usize) -> Result<Vec<RadarAction>, EnvError> {
    if n_subbands == 0 {
        return Err(EnvError::InvalidConfig("n_subbands must be >= 1".into()));
    }
    let mut actions = Vec::with_capacity(action_count(n_subbands));
    for lo in 0..n_subbands {
        for hi in lo..n_subbands {
            actions.push(RadarAction::new(lo, hi, n_subbands)?);
        }
    }
    Ok(actions)
}

/// Counts sub-bands where the radar and the interferer transmit at once.
pub fn count_collisions(
    action: &RadarAction,
    occupancy: &OccupancyVector,
) -> Result<usize, EnvError> {
    if action.n_subbands() != occupancy.len() {
        return Err(EnvError::DimensionMismatch {
            expected: action.n_subbands(),
            got: occupancy.len(),
        });
    }
    Ok(action
        .mask()
        .iter()
        .zip(occupancy.iter())
        .filter(|&(m, o)| m && o)
        .count())
}

/// Counts open sub-bands the radar left unused this step.
pub fn missed_opportunities(
    action: &RadarAction,
    occupancy: &OccupancyVector,
) -> Result<usize, EnvError> {
    if action.n_subbands() != occupancy.len() {
        return Err(EnvError::DimensionMismatch {
            expected: action.n_subbands(),
            got: occupancy.len(),
        });
    }
    Ok(action
        .mask()
        .iter()
        .zip(occupancy.iter())
        .filter(|&(m, o)| !m && !o)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_bands_yield_fifteen_actions() {
        let actions = enumerate_actions(5).unwrap();
        assert_eq!(actions.len(), 15);
        assert_eq!(actions.len(), action_count(5));
    }

    #[test]
    fn single_band_action_set() {
        let actions = enumerate_actions(1).unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!((actions[0].lo(), actions[0].hi()), (0, 0));
    }

    #[test]
    fn three_band_enumeration_matches_brute_force() {
        // Oracle: every binary mask over 3 bits whose ones are contiguous.
        let mut expected = Vec::new();
        for bits in 1u32..8 {
            let pattern: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            let ones: Vec<usize> =
                pattern.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
            let contiguous = ones.windows(2).all(|w| w[1] == w[0] + 1);
            if contiguous {
                expected.push((ones[0], *ones.last().unwrap()));
            }
        }
        expected.sort_unstable();
        let actions = enumerate_actions(3).unwrap();
        let got: Vec<(usize, usize)> = actions.iter().map(|a| (a.lo(), a.hi())).collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn zero_bands_rejected() {
        assert!(enumerate_actions(0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let actions = enumerate_actions(5).unwrap();
        for (i, action) in actions.iter().enumerate() {
            assert_eq!(action.index(), i);
            assert_eq!(&RadarAction::from_index(i, 5).unwrap(), action);
        }
        assert!(RadarAction::from_index(15, 5).is_err());
    }

    #[test]
    fn mask_is_contiguous() {
        let a = RadarAction::new(1, 3, 5).unwrap();
        assert_eq!(a.mask().to_string(), "01110");
        assert_eq!(a.width(), 3);
    }

    #[test]
    fn collision_count_examples() {
        let occ = OccupancyVector::from_occupied(5, &[3, 4]).unwrap();
        let left3 = RadarAction::new(0, 2, 5).unwrap();
        assert_eq!(count_collisions(&left3, &occ).unwrap(), 0);
        let full = RadarAction::full_band(5);
        assert_eq!(count_collisions(&full, &occ).unwrap(), 2);
        let single = RadarAction::new(0, 0, 5).unwrap();
        let open = OccupancyVector::zeros(5);
        assert_eq!(count_collisions(&single, &open).unwrap(), 0);
    }

    #[test]
    fn collision_dimension_mismatch() {
        let occ = OccupancyVector::zeros(4);
        let a = RadarAction::full_band(5);
        assert!(count_collisions(&a, &occ).is_err());
    }

    #[test]
    fn missed_opportunity_count() {
        let occ = OccupancyVector::from_occupied(5, &[3, 4]).unwrap();
        let single = RadarAction::new(0, 0, 5).unwrap();
        assert_eq!(missed_opportunities(&single, &occ).unwrap(), 2);
    }
}
