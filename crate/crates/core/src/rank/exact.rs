use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{numerical_rank, singular_values, CMatrix};
use crate::C64;

/// How `rank_exact` obtained its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// Fraction-free elimination over the integers.
    Integer,
    /// Elimination over `GF(p^2)`, `p = 2^61 - 1`, for Gaussian integers.
    /// Can undercount when `p` divides every maximal nonzero minor.
    PrimeField,
    /// Singular values above `1e-9` after scaling the largest entry to 1.
    Numerical,
}

impl RankMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMethod::Integer => "integer",
            RankMethod::PrimeField => "prime-field",
            RankMethod::Numerical => "numerical",
        }
    }
}

const DYADIC_SHIFT: f64 = (1u64 << 20) as f64;
const DYADIC_LIMIT: f64 = (1u64 << 52) as f64;

fn as_dyadic(x: f64) -> Option<i64> {
    let s = x * DYADIC_SHIFT;
    (s.is_finite() && s == s.round() && s.abs() < DYADIC_LIMIT).then_some(s as i64)
}

/// Entries as Gaussian integers after scaling by `2^20`.
fn gaussian_entries(data: &[C64]) -> Option<Vec<(i64, i64)>> {
    data.iter().map(|z| Some((as_dyadic(z.re)?, as_dyadic(z.im)?))).collect()
}

fn scaled(m: &CMatrix) -> Option<CMatrix> {
    let pivot = m.data().iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if pivot.norm() == 0.0 {
        return None;
    }
    CMatrix::from_vec(m.rows(), m.cols(), m.data().iter().map(|z| z / pivot).collect()).ok()
}

/// Rank over the complex numbers.
pub fn rank_exact(m: &CMatrix) -> usize {
    rank_exact_with_method(m).0
}

/// Tries the raw entries, then the entries divided by the largest one, as
/// dyadic Gaussian integers; otherwise falls back to singular values.
pub fn rank_exact_with_method(m: &CMatrix) -> (usize, RankMethod) {
    if m.data().iter().all(|z| z.norm() == 0.0) {
        return (0, RankMethod::Integer);
    }
    let s = scaled(m).expect("nonzero matrix");
    for cand in [m, &s] {
        if let Some(g) = gaussian_entries(cand.data()) {
            if g.iter().all(|e| e.1 == 0) {
                let rows = (0..m.rows())
                    .map(|r| g[r * m.cols()..(r + 1) * m.cols()].iter().map(|e| e.0 as i128).collect())
                    .collect();
                return (integer_rank(rows, m.cols()), RankMethod::Integer);
            }
            return (field_rank(&g, m.rows(), m.cols()), RankMethod::PrimeField);
        }
    }
    (numerical_rank(&s, crate::TOL), RankMethod::Numerical)
}

fn integer_rank(rows: Vec<Vec<i128>>, cols: usize) -> usize {
    match eliminate_i128(rows.clone(), cols) {
        Some(r) => r,
        None => eliminate_big(
            rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
            cols,
        ),
    }
}

fn content_i128(row: &[i128]) -> i128 {
    row.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Row elimination with gcd normalization; `None` on overflow.
fn eliminate_i128(mut a: Vec<Vec<i128>>, cols: usize) -> Option<usize> {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c] == 0 {
                continue;
            }
            let g = pivot[c].gcd(&row[c]);
            let (f1, f2) = (pivot[c] / g, row[c] / g);
            for j in c..cols {
                row[j] = f1.checked_mul(row[j])?.checked_sub(f2.checked_mul(pivot[j])?)?;
            }
            let g = content_i128(row);
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn eliminate_big(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot[c].gcd(&row[c]);
            let (f1, f2) = (&pivot[c] / &g, &row[c] / &g);
            for j in c..cols {
                row[j] = &f1 * &row[j] - &f2 * &pivot[j];
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.abs() > BigInt::from(1) {
                row.iter_mut().for_each(|x| *x = &*x / &g);
            }
        }
        rank += 1;
    }
    rank
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    (a as u128 * b as u128 % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let r = a + b;
    if r >= P {
        r - P
    } else {
        r
    }
}

fn submod(a: u64, b: u64) -> u64 {
    addmod(a, P - b)
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// `a + b i` with `i^2 = -1`; a field because `p = 3 mod 4`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Fp2(u64, u64);

impl Fp2 {
    fn from_int(x: i64) -> u64 {
        if x < 0 {
            P - (x.unsigned_abs() % P)
        } else {
            x as u64 % P
        }
    }

    fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    fn mul(self, o: Fp2) -> Fp2 {
        Fp2(
            submod(mulmod(self.0, o.0), mulmod(self.1, o.1)),
            addmod(mulmod(self.0, o.1), mulmod(self.1, o.0)),
        )
    }

    fn sub(self, o: Fp2) -> Fp2 {
        Fp2(submod(self.0, o.0), submod(self.1, o.1))
    }

    fn inv(self) -> Fp2 {
        let norm = addmod(mulmod(self.0, self.0), mulmod(self.1, self.1));
        let ni = powmod(norm, P - 2);
        Fp2(mulmod(self.0, ni), mulmod((P - self.1) % P, ni))
    }
}

fn field_rank(g: &[(i64, i64)], rows: usize, cols: usize) -> usize {
    let mut a: Vec<Vec<Fp2>> = (0..rows)
        .map(|r| {
            g[r * cols..(r + 1) * cols]
                .iter()
                .map(|&(x, y)| Fp2(Fp2::from_int(x), Fp2::from_int(y)))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].inv();
        let pivot: Vec<Fp2> = a[rank].iter().map(|&x| x.mul(inv)).collect();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                row[j] = row[j].sub(f.mul(pivot[j]));
            }
        }
        rank += 1;
    }
    rank
}

/// Smallest `k` with `sum_{i >= k} sigma_i^2 <= eps` (singular values in
/// decreasing order). Any `L` with `|L - M|_F^2 <= eps` has rank at least
/// this value.
pub fn rank_eps_lower_bound(m: &CMatrix, eps: f64) -> usize {
    let s = singular_values(m);
    let mut tail = 0.0;
    let mut k = s.len();
    while k > 0 && tail + s[k - 1] * s[k - 1] <= eps + 1e-12 {
        tail += s[k - 1] * s[k - 1];
        k -= 1;
    }
    k
}
