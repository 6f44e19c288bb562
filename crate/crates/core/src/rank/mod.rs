//! Partitions, restrictions and the ranks of the matrices they induce.
//!
//! For a restriction with row variables `y` and column variables `z`, the
//! matrix entry `(y, z)` is the function value at the assembled input.
//! Row and column indices list the assignments in lexicographic order of
//! the variable lists (first variable most significant).

mod chi;
mod exact;
mod experiments;

use rand::seq::SliceRandom;
use rand::Rng;

pub use chi::{chi_max, schmidt_rank, ChiMode};
pub use exact::{rank_eps_lower_bound, rank_exact, rank_exact_with_method, RankMethod};
pub use experiments::{
    erasure_recoverability_check, naive_subset_sum_coverage, subgroup_rank_experiment, subset_sum_coverage,
    subset_sum_residues,
    vandermonde_rank_experiment, ErasureReport, SubgroupReport, SubsetSumReport, VandermondeReport,
};

use crate::formula::FunctionTable;
use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

/// Largest side length of a partition matrix.
pub const MAX_SIDE_LOG2: usize = 12;

/// Split of the variables `1..=n` into two halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub n: usize,
    pub y_vars: Vec<usize>,
    pub z_vars: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, mut y_vars: Vec<usize>, mut z_vars: Vec<usize>) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidParameter(format!("partition needs an even n, got {n}")));
        }
        y_vars.sort_unstable();
        z_vars.sort_unstable();
        let mut all: Vec<usize> = y_vars.iter().chain(&z_vars).copied().collect();
        all.sort_unstable();
        if y_vars.len() != n / 2 || all != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter("not a balanced partition of 1..=n".into()));
        }
        Ok(Partition { n, y_vars, z_vars })
    }

    /// Uniform over balanced partitions.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n % 2 != 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("partition needs an even positive n, got {n}")));
        }
        let mut vars: Vec<usize> = (1..=n).collect();
        vars.shuffle(rng);
        let z = vars.split_off(n / 2);
        Partition::new(n, vars, z)
    }
}

/// `l` row variables, `l` column variables, the rest fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub n: usize,
    pub y_vars: Vec<usize>,
    pub z_vars: Vec<usize>,
    pub fixed: Vec<(usize, bool)>,
}

impl Restriction {
    pub fn new(n: usize, mut y_vars: Vec<usize>, mut z_vars: Vec<usize>, mut fixed: Vec<(usize, bool)>) -> Result<Self> {
        y_vars.sort_unstable();
        z_vars.sort_unstable();
        fixed.sort_unstable();
        let mut all: Vec<usize> = y_vars.iter().chain(&z_vars).copied().chain(fixed.iter().map(|f| f.0)).collect();
        all.sort_unstable();
        if y_vars.len() != z_vars.len() || all != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter("restriction domains must split 1..=n with |y| = |z|".into()));
        }
        Ok(Restriction { n, y_vars, z_vars, fixed })
    }

    /// Uniform choice of the variable sets and of the fixed bits.
    pub fn random<R: Rng + ?Sized>(n: usize, l: usize, rng: &mut R) -> Result<Self> {
        if 2 * l > n {
            return Err(Error::InvalidParameter(format!("2l = {} exceeds n = {n}", 2 * l)));
        }
        let mut vars: Vec<usize> = (1..=n).collect();
        vars.shuffle(rng);
        let rest = vars.split_off(2 * l);
        let z = vars.split_off(l);
        let fixed = rest.into_iter().map(|v| (v, rng.gen::<bool>())).collect();
        Restriction::new(n, vars, z, fixed)
    }

    pub fn l(&self) -> usize {
        self.y_vars.len()
    }
}

impl From<&Partition> for Restriction {
    fn from(p: &Partition) -> Self {
        Restriction {
            n: p.n,
            y_vars: p.y_vars.clone(),
            z_vars: p.z_vars.clone(),
            fixed: Vec::new(),
        }
    }
}

/// Bits of an `n`-variable index set by spreading a local assignment over
/// `vars`.
pub(crate) fn spread(local: usize, vars: &[usize], n: usize) -> usize {
    let l = vars.len();
    vars.iter()
        .enumerate()
        .filter(|(i, _)| local >> (l - 1 - i) & 1 == 1)
        .fold(0, |acc, (_, &v)| acc | 1 << (n - v))
}

pub fn restriction_matrix(f: &FunctionTable, r: &Restriction) -> Result<CMatrix> {
    if f.n != r.n || f.values.len() != 1 << f.n {
        return Err(Error::Dimension(format!("table over {} variables, restriction over {}", f.n, r.n)));
    }
    let l = r.l();
    crate::error::check_qubits("restriction matrix (log2 side)", l, MAX_SIDE_LOG2)?;
    let base = r.fixed.iter().filter(|f| f.1).fold(0, |acc, &(v, _)| acc | 1 << (r.n - v));
    let rows: Vec<usize> = (0..1 << l).map(|y| spread(y, &r.y_vars, r.n)).collect();
    let cols: Vec<usize> = (0..1 << l).map(|z| spread(z, &r.z_vars, r.n)).collect();
    let mut data = Vec::with_capacity(1 << (2 * l));
    for &y in &rows {
        for &z in &cols {
            data.push(f.values[base | y | z]);
        }
    }
    CMatrix::from_vec(1 << l, 1 << l, data)
}

pub fn partition_matrix(f: &FunctionTable, p: &Partition) -> Result<CMatrix> {
    restriction_matrix(f, &Restriction::from(p))
}

/// 0/1 matrix with entry `(y, z) = [sy[y] == sz[z]]`.
pub(crate) fn syndrome_matrix(sy: &[u64], sz: &[u64]) -> CMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let data = sy
        .iter()
        .flat_map(|a| sz.iter().map(move |b| if a == b { one } else { zero }))
        .collect();
    CMatrix::from_vec(sy.len(), sz.len(), data).expect("sizes match")
}
