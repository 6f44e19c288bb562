use std::collections::BTreeMap;

use crate::{Error, Result, C64};

const PRUNE: f64 = 1e-12;
const MAX_TERMS: usize = 1 << 22;

/// Sum of coefficient times monomial; a monomial is a variable mask with
/// bit `i - 1` for `x_i`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultilinearPolynomial {
    terms: BTreeMap<u64, C64>,
}

impl MultilinearPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Self::zero();
        p.insert(0, c);
        p
    }

    pub fn variable(i: usize) -> Self {
        let mut p = Self::zero();
        p.insert(1u64 << (i - 1), C64::new(1.0, 0.0));
        p
    }

    fn insert(&mut self, m: u64, c: C64) {
        if c.norm() > PRUNE {
            self.terms.insert(m, c);
        } else {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, C64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: u64) -> C64 {
        self.terms.get(&monomial).copied().unwrap_or_default()
    }

    /// Variables with a nonzero coefficient somewhere.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0, |a, m| a | m)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.support() >> (i - 1) & 1 == 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &c) in &o.terms {
            let v = out.coefficient(m) + c;
            out.insert(m, v);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let bound = self.len().saturating_mul(o.len());
        if bound > MAX_TERMS {
            return Err(Error::Oversize {
                what: "polynomial expansion (terms)",
                size: bound,
                limit: MAX_TERMS,
            });
        }
        let mut acc: BTreeMap<u64, C64> = BTreeMap::new();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &o.terms {
                if m1 & m2 != 0 {
                    let x = (m1 & m2).trailing_zeros() + 1;
                    return Err(Error::NonMultilinear(format!("x_{x} squared in a product")));
                }
                *acc.entry(m1 | m2).or_default() += c1 * c2;
            }
        }
        let mut out = Self::zero();
        for (m, c) in acc {
            out.insert(m, c);
        }
        Ok(out)
    }

    pub fn eval_bits(&self, n: usize, x: usize) -> C64 {
        let mask = (1..=n).fold(0u64, |a, i| a | ((x >> (n - i) & 1) as u64) << (i - 1));
        self.terms
            .iter()
            .filter(|(&m, _)| m & !mask == 0)
            .map(|(_, c)| c)
            .sum()
    }

    /// Largest coefficient difference over the union of monomials.
    pub fn max_diff(&self, o: &Self) -> f64 {
        self.terms
            .keys()
            .chain(o.terms.keys())
            .map(|m| (self.coefficient(*m) - o.coefficient(*m)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.max_diff(o) <= tol
    }
}
