use super::{make_syntactic, Formula};
use crate::{Error, Result};

/// Formulas this small are returned unchanged.
const BASE_SIZE: usize = 4;

/// Logarithmic-depth equivalent of a multilinear formula.
///
/// A subformula `I` of between a third and two thirds of the leaves is cut
/// out and the formula rewritten as `G + H * I`, where `G` and `H` collect
/// the siblings along the path from the root to `I`; all three parts are
/// balanced recursively.
pub fn balance(f: &Formula) -> Result<Formula> {
    let g = make_syntactic(f)?;
    brent(&g)
}

fn brent(f: &Formula) -> Result<Formula> {
    let s = f.size();
    if s <= BASE_SIZE {
        return Ok(f.clone());
    }
    let mut path: Vec<(bool, &Formula)> = Vec::new();
    let mut cur = f;
    while 3 * cur.size() > 2 * s {
        let (is_mul, a, b) = match cur {
            Formula::Add(a, b) => (false, a, b),
            Formula::Mul(a, b) => (true, a, b),
            _ => unreachable!("a leaf is never larger than 2s/3"),
        };
        let (big, small) = if a.size() >= b.size() { (a, b) } else { (b, a) };
        path.push((is_mul, small));
        cur = big;
    }
    let i = cur;
    let mut g: Option<Formula> = None;
    let mut h: Option<Formula> = None;
    for &(is_mul, sib) in path.iter().rev() {
        if is_mul {
            g = g.map(|g| Formula::mul(g, sib.clone()));
            h = Some(match h {
                None => sib.clone(),
                Some(h) => Formula::mul(h, sib.clone()),
            });
        } else {
            g = Some(match g {
                None => sib.clone(),
                Some(g) => Formula::add(g, sib.clone()),
            });
        }
    }
    if let Some(h) = &h {
        if !h.vars().is_disjoint(i.vars()) {
            return Err(Error::NonMultilinear("cut subformula shares variables with its multiplier".into()));
        }
    }
    let ib = brent(i)?;
    let hi = match h {
        None => ib,
        Some(h) => Formula::mul(brent(&h)?, ib),
    };
    Ok(match g {
        None => hi,
        Some(g) => Formula::add(brent(&g)?, hi),
    })
}
