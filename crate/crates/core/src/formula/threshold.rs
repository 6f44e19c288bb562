use super::Formula;
use crate::{Error, Result};

/// Multilinear formula for `[x_1 + ... + x_k >= h]`.
///
/// Splits the inputs into halves `L` (first `floor(k/2)`) and `R` and sums
/// over the exact count `i` on the left:
/// `T^h = T_L^h + sum_{i<h} (T_L^i - T_L^{i+1}) T_R^{h-i}`.
/// Every product joins formulas on disjoint halves.
pub fn build_threshold_formula(k: usize, h: usize) -> Result<Formula> {
    check(k, h)?;
    Ok(disjoint(1, k, h))
}

fn check(k: usize, h: usize) -> Result<()> {
    if k == 0 || k > 64 || h > k {
        return Err(Error::InvalidParameter(format!("threshold needs 0 <= h <= k, 1 <= k <= 64 (k = {k}, h = {h})")));
    }
    Ok(())
}

/// Threshold over variables `start..start + k`; `None` means constant 0.
fn disjoint_opt(start: usize, k: usize, h: usize) -> Option<Formula> {
    if h == 0 {
        return Some(Formula::real(1.0));
    }
    if h > k {
        return None;
    }
    if k == 1 {
        return Some(Formula::var(start));
    }
    let kl = k / 2;
    let kr = k - kl;
    let mut terms: Vec<Formula> = Vec::new();
    terms.extend(disjoint_opt(start, kl, h));
    for i in 0..h {
        let Some(right) = disjoint_opt(start + kl, kr, h - i) else {
            continue;
        };
        let exact = match (disjoint_opt(start, kl, i), disjoint_opt(start, kl, i + 1)) {
            (None, _) => continue,
            (Some(a), None) => a,
            (Some(a), Some(b)) => Formula::sub(a, b),
        };
        let term = if matches!(exact, Formula::Const(c) if c.re == 1.0 && c.im == 0.0) {
            right
        } else {
            Formula::mul(exact, right)
        };
        terms.push(term);
    }
    if terms.is_empty() {
        None
    } else {
        Some(terms.into_iter().reduce(Formula::add).unwrap())
    }
}

fn disjoint(start: usize, k: usize, h: usize) -> Formula {
    disjoint_opt(start, k, h).unwrap_or_else(|| Formula::real(0.0))
}

/// The textbook product form `1 - prod_{i=0..h} (1 - T_L^i T_R^{h-i})`.
/// Correct on Boolean inputs but not multilinear, since different factors
/// share variables; kept for comparison.
pub fn build_threshold_formula_product(k: usize, h: usize) -> Result<Formula> {
    check(k, h)?;
    Ok(product(1, k, h))
}

fn product(start: usize, k: usize, h: usize) -> Formula {
    if h == 0 {
        return Formula::real(1.0);
    }
    if h > k {
        return Formula::real(0.0);
    }
    if k == 1 {
        return Formula::var(start);
    }
    let kl = k / 2;
    let kr = k - kl;
    let factors: Vec<Formula> = (0..=h)
        .map(|i| {
            Formula::sub(
                Formula::real(1.0),
                Formula::mul(product(start, kl, i), product(start + kl, kr, h - i)),
            )
        })
        .collect();
    Formula::sub(Formula::real(1.0), factors.into_iter().reduce(Formula::mul).unwrap())
}
