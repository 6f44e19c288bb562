use rand::Rng;

use crate::linalg::{numerical_rank, CMatrix};
use crate::rng::trial_rng;
use crate::state::{AmplitudeVector, QubitSet};
use crate::{Error, Result, C64, TOL};

/// Most qubits accepted by `chi_max`.
pub const MAX_CHI_QUBITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiMode {
    /// Every bipartition.
    Exhaustive,
    /// `samples` uniformly random nontrivial bipartitions.
    Sampled { samples: usize, seed: u64 },
    /// Exhaustive up to 12 qubits, 256 samples above.
    Auto,
}

/// Rank of the amplitudes reshaped with the qubits of `a` as row index.
pub fn schmidt_rank(v: &AmplitudeVector, a: QubitSet) -> Result<usize> {
    let n = v.n();
    if !a.is_subset(QubitSet::full(n)) {
        return Err(Error::InvalidQubits(format!("{a} is not within 1..={n}")));
    }
    let rows: Vec<usize> = a.iter().collect();
    let cols: Vec<usize> = QubitSet::full(n).minus(a).iter().collect();
    let norm = v.norm_sqr().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mut m = CMatrix::zeros(1 << rows.len(), 1 << cols.len());
    for r in 0..1usize << rows.len() {
        let base = super::spread(r, &rows, n);
        for c in 0..1usize << cols.len() {
            let idx = base | super::spread(c, &cols, n);
            m.set(r, c, v.amps()[idx] / C64::new(norm, 0.0));
        }
    }
    Ok(numerical_rank(&m, TOL))
}

/// Largest Schmidt rank over bipartitions.
pub fn chi_max(v: &AmplitudeVector, mode: ChiMode) -> Result<usize> {
    let n = v.n();
    crate::error::check_qubits("chi", n, MAX_CHI_QUBITS)?;
    if n < 2 {
        return Ok(1);
    }
    let mode = match mode {
        ChiMode::Auto if n <= 12 => ChiMode::Exhaustive,
        ChiMode::Auto => ChiMode::Sampled { samples: 256, seed: 0 },
        m => m,
    };
    let mut best = 1;
    match mode {
        ChiMode::Exhaustive => {
            // subsets containing qubit 1 cover each bipartition once
            for rest in 0u64..(1 << (n - 1)) - 1 {
                let a = QubitSet::from_bits(1 | rest << 1);
                best = best.max(schmidt_rank(v, a)?);
            }
        }
        ChiMode::Sampled { samples, seed } => {
            let full = QubitSet::full(n).bits();
            for s in 0..samples {
                let mut rng = trial_rng(seed, s as u64);
                let bits = loop {
                    let b = rng.gen::<u64>() & full;
                    if b != 0 && b != full {
                        break b;
                    }
                };
                best = best.max(schmidt_rank(v, QubitSet::from_bits(bits))?);
            }
        }
        ChiMode::Auto => unreachable!(),
    }
    Ok(best)
}
