//! Named state families as trees or dense vectors.

mod field;
mod fixed;

pub use field::{
    build_binary_vandermonde, gf2d_mul, hadamard_encode, min_image_weight, mult_matrix, GF2dField,
    VandermondeParams,
};
pub use fixed::{build_figure2_tree, build_knill_tree};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::gf2::{BitVec, Coset};
use crate::linalg::CMatrix;
use crate::state::{local_basis_change, AmplitudeVector, Node, StateTree};
use crate::{Error, Result, C64};

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn labels(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidParameter(format!("n = {n} outside 1..=64")));
    }
    Ok(())
}

fn check_bit(j: u8) -> Result<bool> {
    match j {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::InvalidParameter(format!("j = {j}, expected 0 or 1"))),
    }
}

/// `(|0...0> + |1...1>)/sqrt(2)`.
pub fn build_cat(n: usize) -> Result<StateTree> {
    check_n(n)?;
    let q = labels(n);
    Ok(StateTree::new(
        n,
        Node::plus(vec![
            (r(FRAC_1_SQRT_2), Node::product(&q, &vec![false; n])),
            (r(FRAC_1_SQRT_2), Node::product(&q, &vec![true; n])),
        ]),
    ))
}

/// Uniform superposition over strings of parity `j`.
pub fn build_parity(n: usize, j: u8) -> Result<StateTree> {
    check_n(n)?;
    let odd = check_bit(j)?;
    Ok(StateTree::new(n, parity_node(&labels(n), odd)))
}

fn parity_node(qs: &[usize], odd: bool) -> Node {
    let m = qs.len();
    if m == 1 {
        return Node::basis(qs[0], odd);
    }
    let h = FRAC_1_SQRT_2;
    if m.is_power_of_two() {
        let (a, b) = qs.split_at(m / 2);
        Node::plus(vec![
            (r(h), Node::tensor_raw(vec![parity_node(a, false), parity_node(b, odd)])),
            (r(h), Node::tensor_raw(vec![parity_node(a, true), parity_node(b, !odd)])),
        ])
    } else {
        let rest = &qs[1..];
        Node::plus(vec![
            (r(h), Node::tensor_raw(vec![Node::basis(qs[0], false), parity_node(rest, odd)])),
            (r(h), Node::tensor_raw(vec![Node::basis(qs[0], true), parity_node(rest, !odd)])),
        ])
    }
}

/// Parity state written in the Hadamard basis:
/// `(|+>^n + (-1)^j |->^n)/sqrt(2)`.
pub fn build_parity_fourier(n: usize, j: u8) -> Result<StateTree> {
    check_n(n)?;
    let sign = if check_bit(j)? { -1.0 } else { 1.0 };
    let h = FRAC_1_SQRT_2;
    let plus = Node::tensor((1..=n).map(Node::plus_state).collect());
    let minus = Node::tensor((1..=n).map(|q| Node::leaf(q, r(h), r(-h))).collect());
    Ok(StateTree::new(n, Node::plus(vec![(r(h), plus), (r(sign * h), minus)])))
}

/// `counts[i][j][k]`: strings of length `m` with first bit `i`, last bit
/// `k` and `sum x_t x_{t+1} = j (mod 2)`.
fn cluster_counts(m: usize) -> [[[u128; 2]; 2]; 2] {
    let mut out = [[[0u128; 2]; 2]; 2];
    for i in 0..2 {
        // state[last][parity]
        let mut st = [[0u128; 2]; 2];
        st[i][0] = 1;
        for _ in 1..m {
            let mut next = [[0u128; 2]; 2];
            for last in 0..2 {
                for par in 0..2 {
                    for b in 0..2 {
                        next[b][par ^ (last & b)] += st[last][par];
                    }
                }
            }
            st = next;
        }
        for k in 0..2 {
            for j in 0..2 {
                out[i][j][k] = st[k][j];
            }
        }
    }
    out
}

/// Uniform superposition over the strings counted by `cluster_counts`,
/// or `None` when there are none.
fn cluster_branch(qs: &[usize], i: usize, j: usize, k: usize) -> Option<Node> {
    let m = qs.len();
    let total = cluster_counts(m)[i][j][k];
    if total == 0 {
        return None;
    }
    if m == 1 {
        return Some(Node::basis(qs[0], i == 1));
    }
    let h = m / 2;
    let (left, right) = qs.split_at(h);
    let (cl, cr) = (cluster_counts(h), cluster_counts(m - h));
    let mut terms = Vec::new();
    for j1 in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let j2 = j ^ j1 ^ (a & b);
                let nl = cl[i][j1][a];
                let nr = cr[b][j2][k];
                if nl == 0 || nr == 0 {
                    continue;
                }
                let w = ((nl * nr) as f64 / total as f64).sqrt();
                let node = Node::tensor_raw(vec![
                    cluster_branch(left, i, j1, a).unwrap(),
                    cluster_branch(right, b, j2, k).unwrap(),
                ]);
                terms.push((w, node));
            }
        }
    }
    if terms.len() == 1 {
        return terms.pop().map(|(_, n)| n);
    }
    Some(Node::plus(terms.into_iter().map(|(w, n)| (r(w), n)).collect()))
}

/// One-dimensional cluster state
/// `2^{-n/2} sum_x (-1)^{x1 x2 + ... + x_{n-1} x_n} |x>`.
pub fn build_cluster1d(n: usize) -> Result<StateTree> {
    if n < 2 || !n.is_power_of_two() || n > 64 {
        return Err(Error::InvalidParameter(format!("n = {n} must be a power of 2 in 2..=64")));
    }
    let qs = labels(n);
    // psi = uniform - 2 * 2^{-n/2} * sum_{x : phase odd} |x>
    let counts = cluster_counts(n);
    let mut terms = vec![(r(1.0), Node::tensor((1..=n).map(Node::plus_state).collect()))];
    for i in 0..2 {
        for k in 0..2 {
            if let Some(node) = cluster_branch(&qs, i, 1, k) {
                let c = -2.0 * 2f64.powf(-(n as f64) / 2.0) * (counts[i][1][k] as f64).sqrt();
                terms.push((r(c), node));
            }
        }
    }
    Ok(StateTree::new(n, Node::plus(terms)))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Uniform superposition over strings of Hamming weight `k`.
pub fn build_hamming(n: usize, k: usize) -> Result<StateTree> {
    check_n(n)?;
    if k > n {
        return Err(Error::InvalidParameter(format!("weight {k} exceeds n = {n}")));
    }
    Ok(StateTree::new(n, hamming_node(&labels(n), k)))
}

fn hamming_node(qs: &[usize], k: usize) -> Node {
    let n = qs.len();
    if n == 1 {
        return Node::basis(qs[0], k == 1);
    }
    let total = binomial(n, k);
    let h = if n.is_power_of_two() { n / 2 } else { 1 };
    let (left, right) = qs.split_at(h);
    let mut terms = Vec::new();
    for j in 0..=k.min(h) {
        if k - j > n - h {
            continue;
        }
        let num = binomial(h, j) * binomial(n - h, k - j);
        let w = (num as f64 / total as f64).sqrt();
        terms.push((
            r(w),
            Node::tensor_raw(vec![hamming_node(left, j), hamming_node(right, k - j)]),
        ));
    }
    if terms.len() == 1 {
        return terms.pop().unwrap().1;
    }
    Node::plus(terms)
}

/// `(1/sqrt|C|) sum_{x in C} |x>` as a sum of classical products.
pub fn build_coset_sigma1(c: &Coset, cap_log2: usize) -> Result<StateTree> {
    let n = c.n();
    check_n(n)?;
    let elems = c.enumerate(cap_log2)?;
    let qs = labels(n);
    let w = r(1.0 / (elems.len() as f64).sqrt());
    let mut terms: Vec<(C64, Node)> = elems
        .iter()
        .map(|x| (w, Node::product(&qs, &x.iter().collect::<Vec<_>>())))
        .collect();
    let root = if terms.len() == 1 { terms.pop().unwrap().1 } else { Node::plus(terms) };
    Ok(StateTree::new(n, root))
}

/// Coset state built in the Hadamard basis, where its support is the row
/// space of `A` with signs `(-1)^{lambda . b}`, then rotated back leaf by
/// leaf.
pub fn build_coset_fourier_otree(c: &Coset, cap_log2: usize) -> Result<StateTree> {
    let n = c.n();
    check_n(n)?;
    let red = c.reduced();
    let rk = red.matrix().rows();
    if rk > cap_log2 {
        return Err(Error::Oversize {
            what: "dual support (log2 of size)",
            size: rk,
            limit: cap_log2,
        });
    }
    let rows: Vec<BitVec> = (0..rk).map(|i| red.matrix().row(i)).collect();
    let qs = labels(n);
    let w = 2f64.powf(-(rk as f64) / 2.0);
    let mut terms = Vec::with_capacity(1 << rk);
    for lambda in 0..1u64 << rk {
        let mut u = BitVec::zeros(n);
        let mut sign = false;
        for (i, row) in rows.iter().enumerate() {
            if lambda >> i & 1 == 1 {
                u.xor_assign(row);
                sign ^= red.rhs().get(i);
            }
        }
        let coef = if sign { -w } else { w };
        terms.push((u, coef));
    }
    terms.sort_by(|a, b| a.0.lex_cmp(&b.0));
    let mut nodes: Vec<(C64, Node)> = terms
        .into_iter()
        .map(|(u, s)| (r(s), Node::product(&qs, &u.iter().collect::<Vec<_>>())))
        .collect();
    let dual = if nodes.len() == 1 {
        let (s, node) = nodes.pop().unwrap();
        debug_assert!((s.re - 1.0).abs() < 1e-15);
        node
    } else {
        Node::plus(nodes)
    };
    let gates: Vec<(usize, CMatrix)> = qs.iter().map(|&q| (q, CMatrix::hadamard())).collect();
    local_basis_change(&StateTree::new(n, dual), &gates)
}

fn check_divisibility(n: usize, p: u64) -> Result<()> {
    if p < 2 || n >= 63 || p.checked_mul(2).is_none_or(|x| x > 1u64 << n) {
        return Err(Error::InvalidParameter(format!("need p >= 2 and 2p <= 2^n (n = {n}, p = {p})")));
    }
    Ok(())
}

/// Uniform superposition over multiples of `p` in `[0, 2^n)`.
pub fn build_divisibility_state(n: usize, p: u64) -> Result<AmplitudeVector> {
    check_divisibility(n, p)?;
    crate::error::check_qubits("divisibility state", n, 30)?;
    let count = (((1u64 << n) - 1) / p + 1) as f64;
    let amps = (0..1u64 << n)
        .map(|x| if x % p == 0 { r(1.0 / count.sqrt()) } else { r(0.0) })
        .collect();
    AmplitudeVector::new(n, amps)
}

/// Sum over `h < p` of product states with leaves
/// `(|0> + e^{2 pi i h 2^{n-q} / p}|1>)/sqrt(2)` on qubit `q`.
pub fn build_divisibility_tree(n: usize, p: u64) -> Result<StateTree> {
    check_divisibility(n, p)?;
    let count = ((1u64 << n) - 1) / p + 1;
    let coef = 2f64.powf(n as f64 / 2.0) / (p as f64 * (count as f64).sqrt());
    let h2 = FRAC_1_SQRT_2;
    let mut terms = Vec::with_capacity(p as usize);
    for h in 0..p {
        let leaves = (1..=n)
            .map(|q| {
                // h * 2^{n-q} mod p, reduced exactly before the angle
                let mut e = h % p;
                for _ in 0..n - q {
                    e = e * 2 % p;
                }
                let phase = C64::from_polar(1.0, 2.0 * PI * e as f64 / p as f64);
                Node::leaf(q, r(h2), phase * h2)
            })
            .collect();
        terms.push((r(coef), Node::tensor(leaves)));
    }
    Ok(StateTree::new(n, Node::plus(terms)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::rng::trial_rng;
    use crate::state::{classify, evaluate, fidelity, validate, TreeClass};

    fn assert_valid(t: &StateTree) {
        let v = validate(t, 20);
        assert!(v.is_empty(), "{:?}", v);
    }

    /// Dense uniform superposition over the strings accepted by `pred`.
    fn uniform_oracle(n: usize, pred: impl Fn(usize) -> bool) -> AmplitudeVector {
        let amps: Vec<f64> = (0..1usize << n).map(|x| if pred(x) { 1.0 } else { 0.0 }).collect();
        AmplitudeVector::from_real(n, &amps).unwrap().normalized().unwrap()
    }

    fn close(t: &StateTree, v: &AmplitudeVector) {
        assert_valid(t);
        let w = evaluate(t, 20).unwrap();
        let f = fidelity(&w, v).unwrap();
        assert!(f > 1.0 - 1e-9, "fidelity {f}");
        assert!(crate::state::l2_distance2(&w, v).unwrap() < 1e-18, "global phase differs");
    }

    #[test]
    fn cat_states() {
        for n in 1..=8 {
            let t = build_cat(n).unwrap();
            close(&t, &uniform_oracle(n, |x| x == 0 || x == (1 << n) - 1));
            assert_eq!(t.size(), 2 * n);
            assert_eq!(classify(&t, 20).unwrap(), TreeClass::ManifestlyOrthogonal);
        }
    }

    #[test]
    fn parity_states() {
        for n in 1..=10 {
            for j in 0..2u8 {
                let t = build_parity(n, j).unwrap();
                close(&t, &uniform_oracle(n, |x| x.count_ones() % 2 == j as u32));
                if n.is_power_of_two() {
                    assert_eq!(t.size(), n * n);
                }
                let f = build_parity_fourier(n, j).unwrap();
                close(&f, &uniform_oracle(n, |x| x.count_ones() % 2 == j as u32));
                assert_eq!(f.size(), 2 * n);
            }
        }
        let t = build_parity(8, 1).unwrap();
        assert_eq!(classify(&t, 20).unwrap(), TreeClass::ManifestlyOrthogonal);
        assert_eq!(classify(&build_parity_fourier(6, 0).unwrap(), 20).unwrap(), TreeClass::Orthogonal);
        assert!(build_parity(4, 2).is_err());
    }

    fn cluster_oracle(n: usize) -> AmplitudeVector {
        let amps: Vec<f64> = (0..1usize << n)
            .map(|x| {
                let bit = |i: usize| x >> (n - i) & 1;
                let s: usize = (1..n).map(|i| bit(i) & bit(i + 1)).sum();
                if s % 2 == 0 { 1.0 } else { -1.0 }
            })
            .collect();
        AmplitudeVector::from_real(n, &amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn cluster_states() {
        let t = build_cluster1d(2).unwrap();
        let v = evaluate(&t, 20).unwrap();
        for (a, e) in v.amps().iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((a - r(e)).norm() < 1e-12);
        }
        for n in [2, 4, 8, 16] {
            close(&build_cluster1d(n).unwrap(), &cluster_oracle(n));
        }
        assert!(build_cluster1d(6).is_err());
    }

    #[test]
    fn cluster_counts_by_enumeration() {
        for m in 1..=10 {
            let c = cluster_counts(m);
            let mut brute = [[[0u128; 2]; 2]; 2];
            for x in 0..1usize << m {
                let bit = |i: usize| x >> (m - 1 - i) & 1;
                let s: usize = (0..m - 1).map(|i| bit(i) & bit(i + 1)).sum();
                brute[bit(0)][s % 2][bit(m - 1)] += 1;
            }
            assert_eq!(c, brute);
        }
    }

    #[test]
    fn hamming_states() {
        for n in 1..=9 {
            for k in 0..=n {
                let t = build_hamming(n, k).unwrap();
                close(&t, &uniform_oracle(n, |x| x.count_ones() as usize == k));
                assert_eq!(classify(&t, 20).unwrap(), TreeClass::ManifestlyOrthogonal);
            }
        }
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert!(build_hamming(3, 4).is_err());
    }

    fn coset_oracle(c: &Coset) -> AmplitudeVector {
        let n = c.n();
        uniform_oracle(n, |x| c.contains(&BitVec::from_index(x as u64, n)))
    }

    #[test]
    fn coset_states() {
        let parity = Coset::subgroup(BitMatrix::from_strs(&["1111"]).unwrap());
        let t = build_coset_sigma1(&parity, 20).unwrap();
        assert_eq!(t.size(), 32);
        close(&t, &coset_oracle(&parity));
        let id = Coset::new(BitMatrix::identity(3), BitVec::parse("101").unwrap()).unwrap();
        let t = build_coset_sigma1(&id, 20).unwrap();
        assert_eq!(t.size(), 3);
        close(&t, &coset_oracle(&id));

        let pair = Coset::subgroup(BitMatrix::from_strs(&["11"]).unwrap());
        let f = build_coset_fourier_otree(&pair, 20).unwrap();
        close(&f, &uniform_oracle(2, |x| x == 0 || x == 3));
        let free = Coset::subgroup(BitMatrix::zeros(0, 5));
        let f = build_coset_fourier_otree(&free, 20).unwrap();
        close(&f, &uniform_oracle(5, |_| true));
        assert!(f.size() <= 10);

        let mut rng = trial_rng(5, 0);
        for _ in 0..10 {
            let a = BitMatrix::random(3, 10, &mut rng);
            let x = BitVec::from_index(rand::Rng::gen_range(&mut rng, 0..1024), 10);
            let c = Coset::new(a.clone(), a.mul_vec(&x).unwrap()).unwrap();
            let f = build_coset_fourier_otree(&c, 20).unwrap();
            close(&f, &coset_oracle(&c));
            assert!(f.size() <= 2 * 10 * 8);
            assert!(classify(&f, 20).unwrap() >= TreeClass::Orthogonal);
            let s = build_coset_sigma1(&c, 20).unwrap();
            close(&s, &coset_oracle(&c));
        }
    }

    #[test]
    fn divisibility() {
        let v = build_divisibility_state(3, 2).unwrap();
        let expect = uniform_oracle(3, |x| x % 2 == 0);
        assert!(crate::state::l2_distance2(&v, &expect).unwrap() < 1e-24);
        let v = build_divisibility_state(4, 3).unwrap();
        assert!((v.amps()[15] - r(1.0 / 6f64.sqrt())).norm() < 1e-15);
        for (n, p) in [(3, 2), (4, 3), (8, 5), (10, 7), (6, 32)] {
            let t = build_divisibility_tree(n, p).unwrap();
            close(&t, &uniform_oracle(n, |x| x as u64 % p == 0));
            assert!(t.size() <= p as usize * (n + 2));
        }
        assert!(build_divisibility_tree(3, 5).is_err());
        assert!(build_divisibility_tree(3, 1).is_err());
    }
}
