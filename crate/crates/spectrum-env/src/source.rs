use crate::error::EnvError;
use crate::occupancy::OccupancyVector;

/// A model of the uncooperative communications system.
///
/// `Tdd` toggles its bands with a fixed duty cycle, `Fdd` holds them
/// continuously, and `Trace` replays externally recorded occupancy rows.
#[derive(Debug, Clone)]
pub enum InterferenceSource {
    Tdd { bands: Vec<usize>, on_steps: usize, off_steps: usize, phase: usize },
    Fdd { bands: Vec<usize> },
    Trace { rows: Vec<OccupancyVector>, wrap: bool },
}

impl InterferenceSource {
    pub fn validate(&self, n_subbands: usize) -> Result<(), EnvError> {
        match self {
            Self::Tdd { bands, on_steps, off_steps, .. } => {
                if on_steps + off_steps == 0 {
                    return Err(EnvError::InvalidConfig(
                        "tdd on_steps + off_steps must be >= 1".into(),
                    ));
                }
                check_bands(bands, n_subbands)
            }
            Self::Fdd { bands } => check_bands(bands, n_subbands),
            Self::Trace { rows, .. } => {
                if rows.is_empty() {
                    return Err(EnvError::InvalidConfig("trace rows must be nonempty".into()));
                }
                for row in rows {
                    if row.len() != n_subbands {
                        return Err(EnvError::DimensionMismatch {
                            expected: n_subbands,
                            got: row.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_bands(bands: &[usize], n_subbands: usize) -> Result<(), EnvError> {
    for &b in bands {
        if b >= n_subbands {
            return Err(EnvError::InvalidConfig(format!(
                "band index {b} out of range for {n_subbands} sub-bands"
            )));
        }
    }
    Ok(())
}

/// True occupancy emitted by the source at step `t`.
pub fn advance_interference(
    source: &InterferenceSource,
    t: usize,
    n_subbands: usize,
) -> Result<OccupancyVector, EnvError> {
    match source {
        InterferenceSource::Tdd { bands, on_steps, off_steps, phase } => {
            let period = on_steps + off_steps;
            if period == 0 {
                return Err(EnvError::InvalidConfig("tdd period must be >= 1".into()));
            }
            if (t + phase) % period < *on_steps {
                OccupancyVector::from_occupied(n_subbands, bands)
            } else {
                Ok(OccupancyVector::zeros(n_subbands))
            }
        }
        InterferenceSource::Fdd { bands } => OccupancyVector::from_occupied(n_subbands, bands),
        InterferenceSource::Trace { rows, wrap } => {
            if rows.is_empty() {
                return Err(EnvError::InvalidConfig("trace rows must be nonempty".into()));
            }
            if *wrap {
                Ok(rows[t % rows.len()].clone())
            } else if t < rows.len() {
                Ok(rows[t].clone())
            } else {
                Err(EnvError::TraceExhausted(t))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tdd() -> InterferenceSource {
        InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 0 }
    }

    #[test]
    fn tdd_on_at_zero() {
        let occ = advance_interference(&tdd(), 0, 5).unwrap();
        assert_eq!(occ.to_string(), "01100");
    }

    #[test]
    fn tdd_off_at_four() {
        // 4 mod 5 = 4 >= 3, so the source is silent.
        let occ = advance_interference(&tdd(), 4, 5).unwrap();
        assert_eq!(occ.to_string(), "00000");
    }

    #[test]
    fn tdd_phase_shifts_the_pattern() {
        let shifted =
            InterferenceSource::Tdd { bands: vec![1, 2], on_steps: 3, off_steps: 2, phase: 4 };
        let occ = advance_interference(&shifted, 0, 5).unwrap();
        assert_eq!(occ.to_string(), "00000");
    }

    #[test]
    fn fdd_is_always_on() {
        let fdd = InterferenceSource::Fdd { bands: vec![0, 1] };
        for t in [0, 1, 7, 1000] {
            let occ = advance_interference(&fdd, t, 5).unwrap();
            assert_eq!(occ.to_string(), "11000");
        }
    }

    #[test]
    fn trace_wraps_or_exhausts() {
        let rows = vec![
            OccupancyVector::from_occupied(3, &[0]).unwrap(),
            OccupancyVector::from_occupied(3, &[2]).unwrap(),
        ];
        let wrapping = InterferenceSource::Trace { rows: rows.clone(), wrap: true };
        assert_eq!(advance_interference(&wrapping, 5, 3).unwrap(), rows[1]);
        let finite = InterferenceSource::Trace { rows, wrap: false };
        assert!(advance_interference(&finite, 1, 3).is_ok());
        assert!(matches!(
            advance_interference(&finite, 2, 3),
            Err(EnvError::TraceExhausted(2))
        ));
    }

    #[test]
    fn validate_rejects_band_out_of_range() {
        let fdd = InterferenceSource::Fdd { bands: vec![5] };
        assert!(fdd.validate(5).is_err());
    }
}
