use super::Formula;
use crate::{Error, Result, C64};

/// Replaces every occurrence of `x_i` by the constant `value`.
pub fn substitute(f: &Formula, i: usize, value: C64) -> Formula {
    match f {
        Formula::Var(j) if *j == i => Formula::Const(value),
        Formula::Const(_) | Formula::Var(_) => f.clone(),
        Formula::Add(a, b) => Formula::add(substitute(a, i, value), substitute(b, i, value)),
        Formula::Mul(a, b) => Formula::mul(substitute(a, i, value), substitute(b, i, value)),
    }
}

/// Equivalent formula in which the two sides of every product share no
/// variable. A shared variable is set to zero in the side whose
/// polynomial does not depend on it. Size never grows.
pub fn make_syntactic(f: &Formula) -> Result<Formula> {
    match f {
        Formula::Const(_) | Formula::Var(_) => Ok(f.clone()),
        Formula::Add(a, b) => Ok(Formula::add(make_syntactic(a)?, make_syntactic(b)?)),
        Formula::Mul(a, b) => {
            let mut a = make_syntactic(a)?;
            let mut b = make_syntactic(b)?;
            let shared = a.vars().intersection(b.vars());
            if shared.is_empty() {
                return Ok(Formula::mul(a, b));
            }
            let (pa, pb) = (a.expand()?, b.expand()?);
            for x in shared.iter() {
                let zero = C64::new(0.0, 0.0);
                if !pa.depends_on(x) {
                    a = substitute(&a, x, zero);
                } else if !pb.depends_on(x) {
                    b = substitute(&b, x, zero);
                } else {
                    return Err(Error::NonMultilinear(format!("x_{x} occurs on both sides of a product")));
                }
            }
            Ok(Formula::mul(a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testgen::random_multilinear;
    use super::*;
    use crate::rng::trial_rng;
    use rand::Rng;

    #[test]
    fn fixes_hidden_sharing() {
        // x1 * (x2 + 0 * x1)
        let f = Formula::mul(
            Formula::var(1),
            Formula::add(Formula::var(2), Formula::mul(Formula::real(0.0), Formula::var(1))),
        );
        let g = make_syntactic(&f).unwrap();
        assert!(g.is_syntactic());
        assert_eq!(g.size(), f.size());
        assert!(g.expand().unwrap().approx_eq(&f.expand().unwrap(), 1e-12));
    }

    #[test]
    fn rejects_squares() {
        let f = Formula::mul(Formula::var(1), Formula::add(Formula::var(1), Formula::var(2)));
        assert!(make_syntactic(&f).is_err());
    }

    /// Adds `c * (x_i - x_i)` style noise so shared variables appear on both
    /// sides of products without changing the polynomial.
    fn obfuscate<R: Rng>(rng: &mut R, f: &Formula, vars: &[usize]) -> Formula {
        match f {
            Formula::Mul(a, b) => {
                let x = vars[rng.gen_range(0..vars.len())];
                let zero_term = Formula::mul(Formula::real(0.0), Formula::var(x));
                let a2 = obfuscate(rng, a, vars);
                let b2 = obfuscate(rng, b, vars);
                if a.expand().unwrap().depends_on(x) {
                    Formula::mul(a2, Formula::add(b2, zero_term))
                } else {
                    Formula::mul(Formula::add(a2, zero_term), b2)
                }
            }
            Formula::Add(a, b) => Formula::add(obfuscate(rng, a, vars), obfuscate(rng, b, vars)),
            _ => f.clone(),
        }
    }

    #[test]
    fn random_formulas_become_syntactic() {
        let mut rng = trial_rng(21, 0);
        let vars: Vec<usize> = (1..=8).collect();
        for _ in 0..50 {
            let base = random_multilinear(&mut rng, &vars, 40);
            let f = obfuscate(&mut rng, &base, &vars);
            assert!(f.size() <= 64 + 40);
            let g = make_syntactic(&f).unwrap();
            assert!(g.is_syntactic());
            assert!(g.size() <= f.size());
            assert!(g.expand().unwrap().approx_eq(&f.expand().unwrap(), 1e-9));
        }
    }
}
