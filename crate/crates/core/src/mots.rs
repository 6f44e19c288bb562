//! Exact minimum size of manifestly orthogonal trees for coset states.
//!
//! For a coset of `{x : A x = b}` the minimum depends only on `A` and
//! satisfies
//!
//! ```text
//! M(A) = min over column splits (I, J) of
//!        2^{rank A_I + rank A_J - rank A} (M(A_I) + M(A_J))
//! ```
//!
//! with single columns as the base case. The table is filled over all
//! column subsets in increasing mask order, enumerating submasks that
//! contain the lowest column of each mask.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::gf2::{insert_word, BitMatrix, Coset};
use crate::rng::trial_rng;
use crate::state::{Node, StateTree};
use crate::{Error, Result, C64};

/// Largest number of columns the table solver accepts.
pub const MAX_COLUMNS: usize = 22;
/// Witness trees are built only for cosets of at most `2^20` elements.
pub const WITNESS_CAP_LOG2: usize = 20;

/// Cost of a single-qubit leaf carrying both basis states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafConvention {
    /// Leaves are basis states; `(|0> + |1>)/sqrt 2` costs two.
    Classical,
    /// Any single-qubit state is one leaf.
    Free,
}

impl LeafConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            LeafConvention::Classical => "classical",
            LeafConvention::Free => "free",
        }
    }

    fn both(self) -> u64 {
        match self {
            LeafConvention::Classical => 2,
            LeafConvention::Free => 1,
        }
    }
}

impl std::str::FromStr for LeafConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(LeafConvention::Classical),
            "free" => Ok(LeafConvention::Free),
            _ => Err(Error::InvalidParameter(format!("unknown leaf convention '{s}'"))),
        }
    }
}

/// Values and optimal splits for every column subset. Column `j` is bit
/// `j` of a mask.
#[derive(Clone, Debug)]
pub struct MotsTable {
    pub n: usize,
    pub convention: LeafConvention,
    pub values: Vec<u64>,
    /// Column set `I` of the optimal split (0 for single columns).
    pub split: Vec<u32>,
    pub ranks: Vec<u8>,
}

impl MotsTable {
    pub fn value(&self, mask: usize) -> u64 {
        self.values[mask]
    }

    pub fn full_mask(&self) -> usize {
        (1usize << self.n) - 1
    }

    /// `mask rank value split` rows, masks as column lists.
    pub fn to_tsv(&self) -> String {
        let cols = |m: usize| -> String {
            let v: Vec<String> = (0..self.n).filter(|j| m >> j & 1 == 1).map(|j| (j + 1).to_string()).collect();
            if v.is_empty() {
                "-".into()
            } else {
                v.join(",")
            }
        };
        let mut s = String::from("columns\trank\tvalue\tsplit\n");
        for m in 1..self.values.len() {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                cols(m),
                self.ranks[m],
                self.values[m],
                cols(self.split[m] as usize)
            ));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct MotsResult {
    pub value: u64,
    pub witness: Option<StateTree>,
    pub table: MotsTable,
    pub convention: LeafConvention,
}

fn column_words(a: &BitMatrix) -> Vec<u64> {
    let basis = a.row_basis();
    (0..a.cols()).map(|j| basis.column_word(j)).collect()
}

fn fill_ranks(cols: &[u64], start: usize, mask: usize, basis: &mut [u64; 64], rank: u8, ranks: &mut [u8]) {
    for c in start..cols.len() {
        let nm = mask | 1 << c;
        let mut trial = *basis;
        if insert_word(&mut trial, cols[c]) {
            ranks[nm] = rank + 1;
            fill_ranks(cols, c + 1, nm, &mut trial, rank + 1, ranks);
        } else {
            ranks[nm] = rank;
            fill_ranks(cols, c + 1, nm, basis, rank, ranks);
        }
    }
}

/// Ranks of all column subsets.
pub fn subset_ranks(a: &BitMatrix) -> Result<Vec<u8>> {
    let n = a.cols();
    crate::error::check_qubits("column-subset table", n, MAX_COLUMNS)?;
    let cols = column_words(a);
    let mut ranks = vec![0u8; 1 << n];
    fill_ranks(&cols, 0, 0, &mut [0u64; 64], 0, &mut ranks);
    Ok(ranks)
}

pub fn mots_table(a: &BitMatrix, convention: LeafConvention) -> Result<MotsTable> {
    let n = a.cols();
    if n == 0 {
        return Err(Error::InvalidParameter("matrix without columns".into()));
    }
    let ranks = subset_ranks(a)?;
    let size = 1usize << n;
    let mut values = vec![0u64; size];
    let mut split = vec![0u32; size];
    for mask in 1..size {
        if mask.count_ones() == 1 {
            values[mask] = if ranks[mask] == 0 { convention.both() } else { 1 };
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let rm = ranks[mask] as u32;
        let mut best = (u64::MAX, u32::MAX);
        let mut sub = rest;
        loop {
            sub = sub.wrapping_sub(1) & rest;
            let i = low | sub;
            let j = mask ^ i;
            let e = ranks[i] as u32 + ranks[j] as u32 - rm;
            let cost = (values[i] + values[j]) << e;
            if (cost, i as u32) < best {
                best = (cost, i as u32);
            }
            if sub == 0 {
                break;
            }
        }
        values[mask] = best.0;
        split[mask] = best.1;
    }
    Ok(MotsTable {
        n,
        convention,
        values,
        split,
        ranks,
    })
}

/// Minimum tree size for the kernel of `a`.
pub fn mots_coset(a: &BitMatrix, convention: LeafConvention) -> Result<MotsResult> {
    mots_coset_of(&Coset::subgroup(a.clone()), convention)
}

/// Minimum tree size for a coset, with a witness tree when the coset has
/// at most `2^WITNESS_CAP_LOG2` elements.
pub fn mots_coset_of(c: &Coset, convention: LeafConvention) -> Result<MotsResult> {
    let table = mots_table(c.matrix(), convention)?;
    let value = table.value(table.full_mask());
    let witness = if c.log2_size() <= WITNESS_CAP_LOG2 {
        let elems = c.enumerate_indices(WITNESS_CAP_LOG2)?;
        let root = witness_node(&table, table.full_mask(), &elems);
        Some(StateTree::new(table.n, root))
    } else {
        None
    };
    Ok(MotsResult {
        value,
        witness,
        table,
        convention,
    })
}

/// Basis-index bits belonging to the columns of `mask`.
fn index_bits(n: usize, mask: usize) -> u64 {
    (0..n).filter(|j| mask >> j & 1 == 1).fold(0u64, |a, j| a | 1 << (n - 1 - j))
}

fn witness_node(t: &MotsTable, mask: usize, elems: &[u64]) -> Node {
    let n = t.n;
    if mask.count_ones() == 1 {
        let j = mask.trailing_zeros() as usize;
        let q = j + 1;
        let bit = 1u64 << (n - 1 - j);
        let ones = elems.iter().any(|e| e & bit != 0);
        let zeros = elems.iter().any(|e| e & bit == 0);
        return match (zeros, ones, t.convention) {
            (true, true, LeafConvention::Free) => Node::plus_state(q),
            (true, true, LeafConvention::Classical) => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                Node::plus(vec![(h, Node::basis(q, false)), (h, Node::basis(q, true))])
            }
            _ => Node::basis(q, ones),
        };
    }
    let i = t.split[mask] as usize;
    let j = mask ^ i;
    let (bi, bj) = (index_bits(n, i), index_bits(n, j));
    let mut partners: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &e in elems {
        partners.entry(e & bi).or_default().push(e & bj);
    }
    let mut groups: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    for (xi, mut xj) in partners {
        xj.sort_unstable();
        groups.entry(xj).or_default().push(xi);
    }
    let mut terms: Vec<Node> = groups
        .iter()
        .map(|(xj, xi)| Node::tensor(vec![witness_node(t, i, xi), witness_node(t, j, xj)]))
        .collect();
    if terms.len() == 1 {
        return terms.pop().unwrap();
    }
    let w = C64::new(1.0 / (terms.len() as f64).sqrt(), 0.0);
    Node::plus(terms.into_iter().map(|x| (w, x)).collect())
}

/// Largest set the exhaustive search accepts.
pub const BRUTE_MAX_SET: usize = 16;

/// Exhaustive minimum over manifestly orthogonal trees for the uniform
/// superposition over `set` (basis indices on `n <= 4` qubits).
pub fn mots_bruteforce(set: &[u64], n: usize, convention: LeafConvention) -> Result<u64> {
    if n == 0 || n > 4 {
        return Err(Error::Oversize {
            what: "exhaustive search (qubits)",
            size: n,
            limit: 4,
        });
    }
    if set.is_empty() || set.len() > BRUTE_MAX_SET {
        return Err(Error::InvalidParameter(format!("set of {} strings", set.len())));
    }
    let mut s: u16 = 0;
    for &x in set {
        if x >= 1 << n || s >> x & 1 == 1 {
            return Err(Error::InvalidParameter(format!("bad or repeated string {x}")));
        }
        s |= 1 << x;
    }
    let mut b = Brute {
        convention,
        memo: vec![u32::MAX; 16 << 16],
    };
    let q = (1u8 << n) - 1;
    Ok(b.solve(q, s) as u64)
}

struct Brute {
    convention: LeafConvention,
    memo: Vec<u32>,
}

fn project(s: u16, q: u8, sub: u8) -> u16 {
    let m = q.count_ones();
    let k = sub.count_ones();
    let mut out = 0u16;
    let mut bits = s;
    while bits != 0 {
        let x = bits.trailing_zeros();
        bits &= bits - 1;
        let mut y = 0u32;
        for t in 0..4u32 {
            if sub >> t & 1 == 1 {
                let from = m - 1 - local_rank(q, t);
                let to = k - 1 - local_rank(sub, t);
                y |= (x >> from & 1) << to;
            }
        }
        out |= 1 << y;
    }
    out
}

/// Rank of `qubit_bit` among members of `q` counted from the smallest.
/// Bit `t` of a qubit set is qubit `t + 1`; the smallest qubit is the most
/// significant bit of a local index.
fn local_rank(q: u8, qubit_bit: u32) -> u32 {
    (q & ((1u8 << qubit_bit) - 1)).count_ones()
}

impl Brute {
    fn solve(&mut self, q: u8, s: u16) -> u32 {
        let key = (q as usize) << 16 | s as usize;
        if self.memo[key] != u32::MAX {
            return self.memo[key];
        }
        let m = q.count_ones();
        let v = if m == 1 {
            if s.count_ones() == 1 {
                1
            } else {
                self.convention.both() as u32
            }
        } else {
            let mut best = u32::MAX;
            let low = q & q.wrapping_neg();
            let rest = q ^ low;
            let mut sub = rest;
            loop {
                sub = sub.wrapping_sub(1) & rest;
                let i = low | sub;
                let j = q ^ i;
                let (si, sj) = (project(s, q, i), project(s, q, j));
                if si.count_ones() * sj.count_ones() == s.count_ones() {
                    best = best.min(self.solve(i, si) + self.solve(j, sj));
                }
                if sub == 0 {
                    break;
                }
            }
            // Each part needs at least one leaf per qubit.
            if best > 2 * m && s.count_ones() > 1 {
                let low = s & s.wrapping_neg();
                let rest = s ^ low;
                let mut sub = rest;
                loop {
                    sub = sub.wrapping_sub(1) & rest;
                    let s1 = low | sub;
                    let s2 = s ^ s1;
                    best = best.min(self.solve(q, s1) + self.solve(q, s2));
                    if sub == 0 || best == 2 * m {
                        break;
                    }
                }
            }
            best
        };
        self.memo[key] = v;
        v
    }
}

/// Distribution of `M(A)` over random `k x n` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MotsExperimentReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub convention: LeafConvention,
    pub values: Vec<u64>,
    /// Trials where `A` has a zero column.
    pub zero_column: usize,
    /// Trials with a set of at least `12k` columns of rank at most `2k/3`.
    pub low_rank: usize,
}

impl MotsExperimentReport {
    pub fn min(&self) -> u64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Lower median.
    pub fn median(&self) -> u64 {
        let mut v = self.values.clone();
        v.sort_unstable();
        v.get(v.len().saturating_sub(1) / 2).copied().unwrap_or(0)
    }

    pub fn histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.values {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }

    pub fn to_tsv(&self) -> String {
        let t = self.values.len().max(1) as f64;
        let mut s = String::from("key\tvalue\n");
        s.push_str(&format!("n\t{}\nk\t{}\ntrials\t{}\nseed\t{}\nconvention\t{}\n", self.n, self.k, self.values.len(), self.seed, self.convention.as_str()));
        s.push_str(&format!("min\t{}\nmedian\t{}\nmax\t{}\n", self.min(), self.median(), self.max()));
        s.push_str(&format!("zero_column_fraction\t{:.6}\n", self.zero_column as f64 / t));
        s.push_str(&format!("low_rank_fraction\t{:.6}\n", self.low_rank as f64 / t));
        for (v, c) in self.histogram() {
            s.push_str(&format!("hist_{v}\t{c}\n"));
        }
        s
    }
}

pub fn mots_random_experiment(
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    convention: LeafConvention,
) -> Result<MotsExperimentReport> {
    crate::error::check_qubits("random experiment (columns)", n, MAX_COLUMNS)?;
    let mut report = MotsExperimentReport {
        n,
        k,
        seed,
        convention,
        values: Vec::with_capacity(trials),
        zero_column: 0,
        low_rank: 0,
    };
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let a = BitMatrix::random(k, n, &mut rng);
        let table = mots_table(&a, convention)?;
        report.values.push(table.value(table.full_mask()));
        if (0..n).any(|j| table.ranks[1 << j] == 0) {
            report.zero_column += 1;
        }
        if k > 0 && 12 * k <= n {
            let bad = (1usize..1 << n)
                .any(|m| m.count_ones() as usize >= 12 * k && 3 * table.ranks[m] as usize <= 2 * k);
            if bad {
                report.low_rank += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVec;
    use crate::state::{classify, evaluate, fidelity, AmplitudeVector, TreeClass};
    use rand::Rng;

    use LeafConvention::{Classical, Free};

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_strs(rows).unwrap()
    }

    fn value(a: &BitMatrix, c: LeafConvention) -> u64 {
        mots_coset(a, c).unwrap().value
    }

    #[test]
    fn hand_values() {
        for c in [Classical, Free] {
            assert_eq!(value(&m(&["11"]), c), 4);
            assert_eq!(value(&m(&["1111"]), c), 16);
            assert_eq!(value(&m(&["11111111"]), c), 64);
            assert_eq!(value(&m(&["1100", "0110", "0011"]), c), 8);
        }
        assert_eq!(value(&m(&["0"]), Classical), 2);
        assert_eq!(value(&m(&["0"]), Free), 1);
        assert_eq!(value(&BitMatrix::zeros(0, 5), Classical), 10);
        assert_eq!(value(&BitMatrix::zeros(0, 5), Free), 5);
        assert_eq!(value(&BitMatrix::identity(6), Free), 6);
    }

    #[test]
    fn brute_force_small_sets() {
        assert_eq!(mots_bruteforce(&[0, 1], 1, Free).unwrap(), 1);
        assert_eq!(mots_bruteforce(&[0, 1], 1, Classical).unwrap(), 2);
        assert_eq!(mots_bruteforce(&[0, 3], 2, Free).unwrap(), 4);
        assert_eq!(mots_bruteforce(&[0, 1, 2, 3], 2, Free).unwrap(), 2);
        assert_eq!(mots_bruteforce(&[0, 1, 2, 3], 2, Classical).unwrap(), 4);
        assert!(mots_bruteforce(&[0, 0], 2, Free).is_err());
        assert!(mots_bruteforce(&[4], 2, Free).is_err());
    }

    #[test]
    fn projection() {
        // q = {1,2,3}, s = {101}; project onto {1,3} -> 11, onto {2} -> 0
        let s = 1u16 << 0b101;
        assert_eq!(project(s, 0b111, 0b101), 1 << 0b11);
        assert_eq!(project(s, 0b111, 0b010), 1 << 0);
    }

    fn coset_vector(c: &Coset) -> AmplitudeVector {
        let n = c.n();
        let amps: Vec<f64> = (0..1u64 << n)
            .map(|x| if c.contains(&BitVec::from_index(x, n)) { 1.0 } else { 0.0 })
            .collect();
        AmplitudeVector::from_real(n, &amps).unwrap().normalized().unwrap()
    }

    fn only_basis_leaves(n: &Node) -> bool {
        match n.kind() {
            crate::state::NodeKind::Leaf { alpha, beta, .. } => alpha.norm() == 0.0 || beta.norm() == 0.0,
            crate::state::NodeKind::Plus(ch) => ch.iter().all(|(_, c)| only_basis_leaves(c)),
            crate::state::NodeKind::Tensor(ch) => ch.iter().all(only_basis_leaves),
        }
    }

    #[test]
    fn witnesses_and_oracle_agree() {
        for seed in 0..60u64 {
            let mut rng = trial_rng(100 + seed, 0);
            let n = rng.gen_range(1..=4);
            let k = rng.gen_range(0..=n);
            let a = BitMatrix::random(k, n, &mut rng);
            let x = BitVec::from_index(rng.gen_range(0..1u64 << n), n);
            let c = Coset::new(a.clone(), a.mul_vec(&x).unwrap()).unwrap();
            for conv in [Classical, Free] {
                let r = mots_coset_of(&c, conv).unwrap();
                let elems = c.enumerate_indices(20).unwrap();
                assert_eq!(r.value, mots_bruteforce(&elems, n, conv).unwrap(), "{a:?} {conv:?}");
                let w = r.witness.unwrap();
                assert_eq!(w.size() as u64, r.value);
                assert_eq!(classify(&w, 20).unwrap(), TreeClass::ManifestlyOrthogonal);
                let f = fidelity(&evaluate(&w, 20).unwrap(), &coset_vector(&c)).unwrap();
                assert!(f > 1.0 - 1e-9);
                if conv == Classical {
                    assert!(only_basis_leaves(&w.root));
                }
            }
        }
    }

    #[test]
    fn larger_witnesses() {
        let mut rng = trial_rng(77, 0);
        for _ in 0..5 {
            let a = BitMatrix::random(4, 10, &mut rng);
            let c = Coset::subgroup(a.clone());
            let r = mots_coset_of(&c, Free).unwrap();
            let w = r.witness.unwrap();
            assert_eq!(w.size() as u64, r.value);
            assert!(fidelity(&evaluate(&w, 20).unwrap(), &coset_vector(&c)).unwrap() > 1.0 - 1e-9);
            let sigma = crate::builders::build_coset_sigma1(&c, 20).unwrap();
            assert!(r.value <= sigma.size() as u64);
        }
    }

    #[test]
    fn duplicating_a_column_never_helps() {
        let mut rng = trial_rng(55, 0);
        for _ in 0..20 {
            let n = rng.gen_range(2..=8);
            let k = rng.gen_range(1..=n);
            let a = BitMatrix::random(k, n, &mut rng);
            let j = rng.gen_range(0..n);
            let mut cols: Vec<usize> = (0..n).collect();
            cols.push(j);
            let dup = a.select_columns(&cols);
            for conv in [Classical, Free] {
                assert!(value(&dup, conv) >= value(&a, conv));
            }
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = mots_random_experiment(10, 2, 8, 3, Classical).unwrap();
        let b = mots_random_experiment(10, 2, 8, 3, Classical).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_tsv(), b.to_tsv());
        let free = mots_random_experiment(6, 0, 3, 1, Free).unwrap();
        assert!(free.values.iter().all(|&v| v == 6));
    }
}
