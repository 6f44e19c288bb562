use std::collections::{BTreeMap, HashMap};

use rand::seq::index::sample;

use super::{rank_exact, syndrome_matrix, Partition, Restriction, MAX_SIDE_LOG2};
use crate::builders::{build_binary_vandermonde, VandermondeParams};
use crate::gf2::{invertibility_product, BitMatrix, Coset};
use crate::linalg::CMatrix;
use crate::rng::trial_rng;
use crate::{Error, Result};

/// `A x` for every assignment `x` of the listed columns, in index order.
fn syndromes(cols: &[u64]) -> Vec<u64> {
    let l = cols.len();
    let mut out = vec![0u64; 1 << l];
    for x in 1usize..1 << l {
        let low = x.trailing_zeros() as usize;
        out[x] = out[x & (x - 1)] ^ cols[l - 1 - low];
    }
    out
}

fn var_words(a: &BitMatrix, vars: &[usize]) -> Vec<u64> {
    vars.iter().map(|&v| a.column_word(v - 1)).collect()
}

/// Rank of `[sy[y] == sz[z]]`: the number of values hit by both sides.
pub(crate) fn syndrome_rank(sy: &[u64], sz: &[u64]) -> usize {
    let zs: std::collections::HashSet<u64> = sz.iter().copied().collect();
    let ys: std::collections::HashSet<u64> = sy.iter().copied().collect();
    ys.intersection(&zs).count()
}

fn is_permutation(m: &CMatrix) -> bool {
    let n = m.rows();
    if m.cols() != n {
        return false;
    }
    let one = |r: usize, c: usize| m.get(r, c).re == 1.0 && m.get(r, c).im == 0.0;
    let zero = |r: usize, c: usize| m.get(r, c).norm() == 0.0;
    let mut col_hits = vec![0usize; n];
    for r in 0..n {
        let mut hits = 0;
        for c in 0..n {
            if one(r, c) {
                hits += 1;
                col_hits[c] += 1;
            } else if !zero(r, c) {
                return false;
            }
        }
        if hits != 1 {
            return false;
        }
    }
    col_hits.iter().all(|&h| h == 1)
}

fn fraction(k: usize, t: usize) -> f64 {
    if t == 0 {
        0.0
    } else {
        k as f64 / t as f64
    }
}

fn hist_lines<K: std::fmt::Display>(s: &mut String, prefix: &str, h: &BTreeMap<K, usize>) {
    for (k, v) in h {
        s.push_str(&format!("{prefix}_{k}\t{v}\n"));
    }
}

/// Random subgroup `{x : A x = 0}` with `A` uniform `(n/2) x n`, under a
/// uniform balanced partition.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Trials where both projected square submatrices are invertible.
    pub both_invertible: usize,
    /// Trials whose matrix has full rank `2^(n/2)`.
    pub full_rank: usize,
    /// Both-invertible trials whose matrix is exactly a permutation matrix.
    pub permutation_verified: usize,
    pub rank_histogram: BTreeMap<usize, usize>,
    /// Probability that both submatrices are invertible.
    pub expected: f64,
}

impl SubgroupReport {
    pub fn both_invertible_fraction(&self) -> f64 {
        fraction(self.both_invertible, self.trials)
    }

    pub fn full_rank_fraction(&self) -> f64 {
        fraction(self.full_rank, self.trials)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("key\tvalue\n");
        s.push_str(&format!("n\t{}\ntrials\t{}\nseed\t{}\n", self.n, self.trials, self.seed));
        s.push_str(&format!("both_invertible\t{}\n", self.both_invertible));
        s.push_str(&format!("both_invertible_fraction\t{:.6}\n", self.both_invertible_fraction()));
        s.push_str(&format!("expected_fraction\t{:.6}\n", self.expected));
        s.push_str(&format!("full_rank\t{}\n", self.full_rank));
        s.push_str(&format!("full_rank_fraction\t{:.6}\n", self.full_rank_fraction()));
        s.push_str(&format!("permutation_verified\t{}\n", self.permutation_verified));
        hist_lines(&mut s, "rank", &self.rank_histogram);
        s
    }
}

pub fn subgroup_rank_experiment(n: usize, trials: usize, seed: u64) -> Result<SubgroupReport> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("n must be even and positive, got {n}")));
    }
    crate::error::check_qubits("subgroup experiment (log2 side)", n / 2, 10)?;
    let h = n / 2;
    let mut rep = SubgroupReport {
        n,
        trials,
        seed,
        both_invertible: 0,
        full_rank: 0,
        permutation_verified: 0,
        rank_histogram: BTreeMap::new(),
        expected: invertibility_product(h).powi(2),
    };
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let a = BitMatrix::random(h, n, &mut rng);
        let p = Partition::random(n, &mut rng)?;
        let idx = |v: &[usize]| v.iter().map(|x| x - 1).collect::<Vec<_>>();
        let (ay, az) = (a.select_columns(&idx(&p.y_vars)), a.select_columns(&idx(&p.z_vars)));
        let m = syndrome_matrix(&syndromes(&var_words(&a, &p.y_vars)), &syndromes(&var_words(&a, &p.z_vars)));
        let rank = rank_exact(&m);
        *rep.rank_histogram.entry(rank).or_insert(0) += 1;
        if rank == 1 << h {
            rep.full_rank += 1;
        }
        if ay.is_invertible() && az.is_invertible() {
            rep.both_invertible += 1;
            if is_permutation(&m) && rank == 1 << h {
                rep.permutation_verified += 1;
            }
        }
    }
    Ok(rep)
}

/// Full-rank frequency of random `(kd + c) x kd` row submatrices of the
/// binary Vandermonde matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeReport {
    pub params: VandermondeParams,
    pub trials: usize,
    pub seed: u64,
    pub full_rank: usize,
    /// `1 - (1 + k/n)^(kd) (1/2 + k/(2n))^c`.
    pub bound: f64,
}

impl VandermondeReport {
    pub fn fraction(&self) -> f64 {
        fraction(self.full_rank, self.trials)
    }

    pub fn to_tsv(&self) -> String {
        let p = &self.params;
        format!(
            "key\tvalue\nn\t{}\nk\t{}\nd\t{}\nc\t{}\ntrials\t{}\nseed\t{}\nfull_rank\t{}\nfull_rank_fraction\t{:.6}\nbound\t{:.6}\n",
            p.n,
            p.k,
            p.d,
            p.c,
            self.trials,
            self.seed,
            self.full_rank,
            self.fraction(),
            self.bound
        )
    }
}

pub fn vandermonde_rank_experiment(params: VandermondeParams, trials: usize, seed: u64) -> Result<VandermondeReport> {
    let v = build_binary_vandermonde(&params)?;
    let kd = params.k * params.d as usize;
    let take = kd + params.c;
    if take > v.rows() {
        return Err(Error::InvalidParameter(format!("{take} rows requested from {}", v.rows())));
    }
    let (n, k) = (params.n as f64, params.k as f64);
    let bound = 1.0 - (1.0 + k / n).powi(kd as i32) * (0.5 + k / (2.0 * n)).powi(params.c as i32);
    let mut full_rank = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let rows = sample(&mut rng, v.rows(), take).into_vec();
        if v.select_rows(&rows).rank() == kd {
            full_rank += 1;
        }
    }
    Ok(VandermondeReport {
        params,
        trials,
        seed,
        full_rank,
        bound,
    })
}

/// Recoverability of a coset indicator under random restrictions.
#[derive(Clone, Debug, PartialEq)]
pub struct ErasureReport {
    pub n: usize,
    pub l: usize,
    pub trials: usize,
    pub seed: u64,
    /// `2^(l - l^(1/8) / 2)`.
    pub threshold: f64,
    pub rank_at_least_threshold: usize,
    pub rank_histogram: BTreeMap<usize, usize>,
    /// Rows with at least one nonzero entry, summed over trials.
    pub nonzero_rows: usize,
    /// Rows with two or more nonzero entries, summed over trials.
    pub ambiguous_rows: usize,
}

impl ErasureReport {
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("key\tvalue\n");
        s.push_str(&format!("n\t{}\nl\t{}\ntrials\t{}\nseed\t{}\n", self.n, self.l, self.trials, self.seed));
        s.push_str(&format!("threshold\t{:.6}\n", self.threshold));
        s.push_str(&format!(
            "rank_at_least_threshold_fraction\t{:.6}\n",
            fraction(self.rank_at_least_threshold, self.trials)
        ));
        s.push_str(&format!("nonzero_rows\t{}\nambiguous_rows\t{}\n", self.nonzero_rows, self.ambiguous_rows));
        hist_lines(&mut s, "rank", &self.rank_histogram);
        s
    }
}

pub fn erasure_recoverability_check(c: &Coset, l: usize, trials: usize, seed: u64) -> Result<ErasureReport> {
    crate::error::check_qubits("erasure check (log2 coset size)", c.log2_size(), 20)?;
    crate::error::check_qubits("erasure check (log2 side)", l, MAX_SIDE_LOG2)?;
    let n = c.n();
    let red = c.reduced();
    let a = red.matrix();
    let b = (0..a.rows()).filter(|&r| red.rhs().get(r)).fold(0u64, |w, r| w | 1 << r);
    let threshold = 2f64.powf(l as f64 - (l as f64).powf(0.125) / 2.0);
    let mut rep = ErasureReport {
        n,
        l,
        trials,
        seed,
        threshold,
        rank_at_least_threshold: 0,
        rank_histogram: BTreeMap::new(),
        nonzero_rows: 0,
        ambiguous_rows: 0,
    };
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let r = Restriction::random(n, l, &mut rng)?;
        let shift = r.fixed.iter().filter(|f| f.1).fold(b, |w, &(v, _)| w ^ a.column_word(v - 1));
        let sy = syndromes(&var_words(a, &r.y_vars));
        let sz: Vec<u64> = syndromes(&var_words(a, &r.z_vars)).into_iter().map(|s| s ^ shift).collect();
        let rank = syndrome_rank(&sy, &sz);
        *rep.rank_histogram.entry(rank).or_insert(0) += 1;
        if rank as f64 >= threshold {
            rep.rank_at_least_threshold += 1;
        }
        let mut mult: HashMap<u64, usize> = HashMap::new();
        for &s in &sz {
            *mult.entry(s).or_insert(0) += 1;
        }
        for s in &sy {
            match mult.get(s) {
                Some(&k) if k >= 2 => {
                    rep.nonzero_rows += 1;
                    rep.ambiguous_rows += 1;
                }
                Some(_) => rep.nonzero_rows += 1,
                None => {}
            }
        }
    }
    Ok(rep)
}

/// Sizes of `{sum of a subset of A} mod p` for random `A` of `m` distinct
/// powers of two below `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetSumReport {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub gamma: f64,
    pub seed: u64,
    pub coverages: Vec<usize>,
    /// `(1 + gamma) p / 2`.
    pub threshold: f64,
}

impl SubsetSumReport {
    pub fn hits(&self) -> usize {
        self.coverages.iter().filter(|&&c| c as f64 >= self.threshold).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut sorted = self.coverages.clone();
        sorted.sort_unstable();
        let pick = |i: usize| sorted.get(i).copied().unwrap_or(0);
        let mut s = String::from("key\tvalue\n");
        s.push_str(&format!(
            "n\t{}\nm\t{}\np\t{}\ngamma\t{}\ntrials\t{}\nseed\t{}\n",
            self.n,
            self.m,
            self.p,
            self.gamma,
            self.coverages.len(),
            self.seed
        ));
        s.push_str(&format!("threshold\t{:.6}\n", self.threshold));
        s.push_str(&format!("hit_fraction\t{:.6}\n", fraction(self.hits(), self.coverages.len())));
        s.push_str(&format!(
            "min\t{}\nmedian\t{}\nmax\t{}\n",
            pick(0),
            pick(sorted.len().saturating_sub(1) / 2),
            sorted.last().copied().unwrap_or(0)
        ));
        let mut h = BTreeMap::new();
        for c in &self.coverages {
            *h.entry(*c).or_insert(0) += 1;
        }
        hist_lines(&mut s, "coverage", &h);
        s
    }
}

/// Largest modulus accepted by the subset-sum experiment.
pub const MAX_MODULUS: u64 = 1 << 28;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Number of residues mod `p` reached by subset sums, built one element at
/// a time.
pub fn subset_sum_residues(elems: &[u64], p: u64) -> usize {
    let p = p as usize;
    let mut reached = vec![false; p];
    reached[0] = true;
    for &a in elems {
        let a = (a % p as u64) as usize;
        let cur = reached.clone();
        for (r, _) in cur.iter().enumerate().filter(|x| *x.1) {
            reached[(r + a) % p] = true;
        }
    }
    reached.iter().filter(|&&b| b).count()
}

/// Same count by listing all `2^m` subset sums.
pub fn naive_subset_sum_coverage(elems: &[u64], p: u64) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..1 << elems.len() {
        let s = (0..elems.len())
            .filter(|i| mask >> i & 1 == 1)
            .fold(0u64, |acc, i| (acc + elems[i] % p) % p);
        seen.insert(s);
    }
    seen.len()
}

pub fn subset_sum_coverage(n: usize, m: usize, p: u64, gamma: f64, trials: usize, seed: u64) -> Result<SubsetSumReport> {
    crate::error::check_qubits("subset-sum experiment (set size)", m, 24)?;
    if m > n || n > 63 {
        return Err(Error::InvalidParameter(format!("need m <= n <= 63, got m = {m}, n = {n}")));
    }
    if p > MAX_MODULUS || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not a prime below 2^28")));
    }
    let coverages = (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let elems: Vec<u64> = sample(&mut rng, n, m).iter().map(|e| (1u64 << e) % p).collect();
            subset_sum_residues(&elems, p)
        })
        .collect();
    Ok(SubsetSumReport {
        n,
        m,
        p,
        gamma,
        seed,
        coverages,
        threshold: (1.0 + gamma) * p as f64 / 2.0,
    })
}
