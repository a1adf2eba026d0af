use std::fmt;
use std::io::BufRead;
use std::path::Path;

use crate::error::EnvError;

/// Per-sub-band interference snapshot: `true` marks an occupied band,
/// `false` an open one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupancyVector {
    bits: Vec<bool>,
}

impl OccupancyVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// All bands open.
    pub fn zeros(n_subbands: usize) -> Self {
        Self { bits: vec![false; n_subbands] }
    }

    /// Occupancy with exactly the listed bands occupied.
    pub fn from_occupied(n_subbands: usize, bands: &[usize]) -> Result<Self, EnvError> {
        let mut bits = vec![false; n_subbands];
        for &b in bands {
            if b >= n_subbands {
                return Err(EnvError::InvalidConfig(format!(
                    "band index {b} out of range for {n_subbands} sub-bands"
                )));
            }
            bits[b] = true;
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Whether band `i` is occupied.
    pub fn occupied(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn open_count(&self) -> usize {
        self.len() - self.occupied_count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Parses one trace row of comma-separated 0/1 values.
    pub fn parse_csv_row(row: &str) -> Result<Self, EnvError> {
        let mut bits = Vec::new();
        for field in row.split(',') {
            match field.trim() {
                "0" => bits.push(false),
                "1" => bits.push(true),
                other => {
                    return Err(EnvError::MalformedTrace {
                        line: 0,
                        reason: format!("expected 0 or 1, got {other:?}"),
                    })
                }
            }
        }
        if bits.is_empty() {
            return Err(EnvError::MalformedTrace { line: 0, reason: "empty row".into() });
        }
        Ok(Self { bits })
    }
}

impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Reads an occupancy trace: one row per step, N comma-separated 0/1
/// values, `#` lines ignored. All rows must have the same width.
pub fn read_trace<R: BufRead>(reader: R) -> Result<Vec<OccupancyVector>, EnvError> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = OccupancyVector::parse_csv_row(trimmed).map_err(|e| match e {
            EnvError::MalformedTrace { reason, .. } => {
                EnvError::MalformedTrace { line: idx + 1, reason }
            }
            other => other,
        })?;
        if let Some(first) = rows.first() {
            let first: &OccupancyVector = first;
            if first.len() != row.len() {
                return Err(EnvError::MalformedTrace {
                    line: idx + 1,
                    reason: format!("row width {} differs from first row {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a trace from a file path.
pub fn read_trace_file<P: AsRef<Path>>(path: P) -> Result<Vec<OccupancyVector>, EnvError> {
    let file = std::fs::File::open(path)?;
    read_trace(std::io::BufReader::new(file))
}
