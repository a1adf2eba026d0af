use crate::error::EnvError;
use crate::occupancy::OccupancyVector;

/// Total number of interference states, 2^(M*N).
///
/// Fails when the count would overflow the platform index type.
pub fn count_states(n_subbands: usize, history_depth: usize) -> Result<usize, EnvError> {
    if n_subbands == 0 || history_depth == 0 {
        return Err(EnvError::InvalidConfig(
            "n_subbands and history_depth must be >= 1".into(),
        ));
    }
    let bits = n_subbands
        .checked_mul(history_depth)
        .ok_or_else(|| EnvError::InvalidConfig("M*N overflows".into()))?;
    if bits >= usize::BITS as usize {
        return Err(EnvError::InvalidConfig(format!(
            "2^(M*N) = 2^{bits} does not fit the index type"
        )));
    }
    Ok(1usize << bits)
}

/// An M-deep occupancy history together with its dense index.
///
/// Bit order: within one occupancy vector the band with the highest index
/// is the least-significant bit; across the history the newest vector
/// (last element) occupies the least-significant N-bit block. The
/// encode/decode round-trip pins this convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InterferenceState {
    history: Vec<OccupancyVector>,
    index: usize,
}

impl InterferenceState {
    /// Occupancy history, oldest first.
    pub fn history(&self) -> &[OccupancyVector] {
        &self.history
    }

    /// Dense index in `[0, 2^(M*N))`.
    pub fn index(&self) -> usize {
        self.index
    }

    /// The most recent occupancy vector.
    pub fn newest(&self) -> &OccupancyVector {
        self.history.last().expect("history is nonempty")
    }

    pub fn n_subbands(&self) -> usize {
        self.history[0].len()
    }

    pub fn history_depth(&self) -> usize {
        self.history.len()
    }

    /// Flattens the history to 0/1 reals for network input, oldest vector
    /// first, band 0 first within each vector.
    pub fn input_bits(&self) -> Vec<f64> {
        self.history
            .iter()
            .flat_map(|v| v.iter().map(|b| if b { 1.0 } else { 0.0 }))
            .collect()
    }
}

fn encode_vector(occ: &OccupancyVector) -> usize {
    let n = occ.len();
    occ.iter()
        .enumerate()
        .filter(|&(_, b)| b)
        .map(|(i, _)| 1usize << (n - 1 - i))
        .sum()
}

/// Encodes an occupancy history into an [`InterferenceState`].
pub fn encode_state(history: &[OccupancyVector]) -> Result<InterferenceState, EnvError> {
    if history.is_empty() {
        return Err(EnvError::InvalidConfig("history must be nonempty".into()));
    }
    let n = history[0].len();
    for v in history {
        if v.len() != n {
            return Err(EnvError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    // Validates that the index fits.
    count_states(n, history.len())?;
    let m = history.len();
    let mut index = 0usize;
    for (block, occ) in (0..m).map(|j| (j, &history[m - 1 - j])) {
        index |= encode_vector(occ) << (block * n);
    }
    Ok(InterferenceState { history: history.to_vec(), index })
}

/// Exact inverse of [`encode_state`].
pub fn decode_state(
    index: usize,
    n_subbands: usize,
    history_depth: usize,
) -> Result<Vec<OccupancyVector>, EnvError> {
    let n_states = count_states(n_subbands, history_depth)?;
    if index >= n_states {
        return Err(EnvError::IndexOutOfRange { index, n_states });
    }
    let mut history = vec![OccupancyVector::zeros(n_subbands); history_depth];
    for block in 0..history_depth {
        let chunk = (index >> (block * n_subbands)) & ((1 << n_subbands) - 1);
        let bits: Vec<bool> =
            (0..n_subbands).map(|i| chunk >> (n_subbands - 1 - i) & 1 == 1).collect();
        history[history_depth - 1 - block] = OccupancyVector::new(bits);
    }
    Ok(history)
}
