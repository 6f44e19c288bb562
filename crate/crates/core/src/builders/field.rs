//! GF(2^d) arithmetic and the binary Vandermonde construction.

use crate::gf2::{BitMatrix, BitVec};
use crate::{Error, Result};

/// Polynomials over GF(2) modulo an irreducible of degree `d`. Elements
/// are bit patterns, bit `t` the coefficient of `x^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GF2dField {
    d: u32,
    modulus: u32,
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u32, m: u32) -> u32 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

fn is_irreducible(p: u32) -> bool {
    let d = poly_degree(p);
    if d < 1 {
        return false;
    }
    (2u32..1 << (d / 2 + 1))
        .filter(|&q| poly_degree(q) >= 1 && poly_degree(q) <= d / 2)
        .all(|q| poly_mod(p, q) != 0)
}

impl GF2dField {
    /// Smallest irreducible modulus of degree `d`.
    pub fn new(d: u32) -> Result<Self> {
        if !(1..=16).contains(&d) {
            return Err(Error::InvalidParameter(format!("field degree {d} outside 1..=16")));
        }
        let modulus = ((1u32 << d)..(1u32 << (d + 1)))
            .find(|&p| is_irreducible(p))
            .expect("irreducibles exist in every degree");
        Ok(GF2dField { d, modulus })
    }

    pub fn with_modulus(d: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&d) || poly_degree(modulus) != d as i32 || !is_irreducible(modulus) {
            return Err(Error::InvalidParameter(format!(
                "{modulus:#b} is not an irreducible of degree {d}"
            )));
        }
        Ok(GF2dField { d, modulus })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.d
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut acc = 0u32;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.d & 1 == 1 {
                a ^= self.modulus;
            }
        }
        acc
    }

    pub fn pow(&self, a: u32, e: u32) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }
}

pub fn gf2d_mul(field: &GF2dField, a: u32, b: u32) -> u32 {
    field.mul(a, b)
}

/// `d x d` matrix of multiplication by `a`: column `t` holds `a x^t`.
pub fn mult_matrix(field: &GF2dField, a: u32) -> BitMatrix {
    let d = field.d as usize;
    let mut m = BitMatrix::zeros(d, d);
    for t in 0..d {
        let col = field.mul(a, 1 << t);
        for row in 0..d {
            m.set(row, t, col >> row & 1 == 1);
        }
    }
    m
}

/// Entry `u` is `<v, u> mod 2` for `u` in `0..2^d`.
pub fn hadamard_encode(v: u32, d: u32) -> BitVec {
    let bits: Vec<bool> = (0..1u32 << d).map(|u| (v & u).count_ones() % 2 == 1).collect();
    BitVec::from_bools(&bits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VandermondeParams {
    pub n: usize,
    pub k: usize,
    pub d: u32,
    pub c: usize,
}

impl VandermondeParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(1..=16).contains(&self.d) {
            return bad(format!("d = {} outside 1..=16", self.d));
        }
        if self.n == 0 || self.n as u64 >= 1u64 << self.d {
            return bad(format!("labels 1..{} do not fit in GF(2^{})", self.n, self.d));
        }
        if self.k == 0 || self.k >= self.n {
            return bad(format!("need 1 <= k < n, got k = {}", self.k));
        }
        Ok(())
    }
}

/// `(n 2^d) x (k d)` matrix whose block `(i, j)` is the Hadamard encoding
/// of multiplication by `i^j`, labels `i = 1..n`.
pub fn build_binary_vandermonde(p: &VandermondeParams) -> Result<BitMatrix> {
    p.validate()?;
    let field = GF2dField::new(p.d)?;
    let d = p.d as usize;
    let q = 1usize << d;
    let mut v = BitMatrix::zeros(p.n * q, p.k * d);
    for i in 1..=p.n {
        for j in 0..p.k {
            let a = field.pow(i as u32, j as u32);
            for t in 0..d {
                let col = field.mul(a, 1 << t);
                for u in 0..q {
                    if (col & u as u32).count_ones() % 2 == 1 {
                        v.set((i - 1) * q + u, j * d + t, true);
                    }
                }
            }
        }
    }
    Ok(v)
}

/// Minimum Hamming weight of `V u` over nonzero `u`, by exhaustion.
pub fn min_image_weight(v: &BitMatrix) -> Result<usize> {
    let k = v.cols();
    if k == 0 || k > 24 {
        return Err(Error::Oversize {
            what: "exhaustive image weight (columns)",
            size: k,
            limit: 24,
        });
    }
    let rows: Vec<u64> = (0..v.rows()).map(|r| v.row_words(r)[0]).collect();
    Ok((1u64..1 << k)
        .map(|u| rows.iter().filter(|&&r| (r & u).count_ones() % 2 == 1).count())
        .min()
        .unwrap())
}
