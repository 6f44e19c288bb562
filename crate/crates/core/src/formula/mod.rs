//! Arithmetic formulas over complex constants and variables `x_1..x_n`,
//! and their relation to state trees.

mod balance;
mod convert;
mod poly;
mod syntactic;
mod threshold;

pub use balance::balance;
pub use convert::{formula_to_tree, function_to_state, state_to_function, tree_to_formula, FunctionTable};
pub use poly::MultilinearPolynomial;
pub use syntactic::{make_syntactic, substitute};
pub use threshold::{build_threshold_formula, build_threshold_formula_product};

use crate::sexpr::{format_complex, parse_complex, parse_one, syntax_err, SExpr};
use crate::state::QubitSet;
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    Const(C64),
    Var(usize),
    Add(Box<Formula>, Box<Formula>),
    Mul(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn constant(c: C64) -> Formula {
        Formula::Const(c)
    }

    pub fn real(x: f64) -> Formula {
        Formula::Const(C64::new(x, 0.0))
    }

    pub fn var(i: usize) -> Formula {
        assert!((1..=64).contains(&i), "variable {i} out of range");
        Formula::Var(i)
    }

    pub fn add(a: Formula, b: Formula) -> Formula {
        Formula::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Formula, b: Formula) -> Formula {
        Formula::Mul(Box::new(a), Box::new(b))
    }

    /// `a - b`.
    pub fn sub(a: Formula, b: Formula) -> Formula {
        Formula::add(a, Formula::mul(Formula::real(-1.0), b))
    }

    /// `1 - x_i`.
    pub fn not_var(i: usize) -> Formula {
        Formula::sub(Formula::real(1.0), Formula::var(i))
    }

    /// Folds a nonempty list into a balanced binary tree of `op`.
    pub fn fold_balanced(mut items: Vec<Formula>, op: fn(Formula, Formula) -> Formula) -> Formula {
        assert!(!items.is_empty());
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            let mut it = items.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(op(a, b)),
                    None => next.push(a),
                }
            }
            items = next;
        }
        items.pop().unwrap()
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Add(a, b) | Formula::Mul(a, b) => a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 0,
            Formula::Add(a, b) | Formula::Mul(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Variables appearing in the formula.
    pub fn vars(&self) -> QubitSet {
        match self {
            Formula::Const(_) => QubitSet::EMPTY,
            Formula::Var(i) => QubitSet::single(*i),
            Formula::Add(a, b) | Formula::Mul(a, b) => a.vars().union(b.vars()),
        }
    }

    /// True when the children of every product have disjoint variables.
    pub fn is_syntactic(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Var(_) => true,
            Formula::Add(a, b) => a.is_syntactic() && b.is_syntactic(),
            Formula::Mul(a, b) => a.vars().is_disjoint(b.vars()) && a.is_syntactic() && b.is_syntactic(),
        }
    }

    pub fn is_multilinear(&self) -> bool {
        self.expand().is_ok()
    }

    /// Value at `point`, where `point[i - 1]` is `x_i`.
    pub fn eval(&self, point: &[C64]) -> Result<C64> {
        Ok(match self {
            Formula::Const(c) => *c,
            Formula::Var(i) => *point
                .get(i - 1)
                .ok_or_else(|| Error::Dimension(format!("no value for x_{i}")))?,
            Formula::Add(a, b) => a.eval(point)? + b.eval(point)?,
            Formula::Mul(a, b) => a.eval(point)? * b.eval(point)?,
        })
    }

    /// Value at the bitstring of basis index `x` over `n` variables
    /// (`x_1` most significant).
    pub fn eval_bits(&self, n: usize, x: usize) -> Result<C64> {
        let point: Vec<C64> = (1..=n).map(|i| C64::new((x >> (n - i) & 1) as f64, 0.0)).collect();
        self.eval(&point)
    }

    /// Values on all of `{0,1}^n`, indexed like amplitudes.
    pub fn eval_table(&self, n: usize) -> Result<Vec<C64>> {
        crate::error::check_qubits("formula table", n, 24)?;
        if self.vars().max() > n {
            return Err(Error::Dimension(format!(
                "formula uses x_{} but only {n} variables given",
                self.vars().max()
            )));
        }
        Ok(self.table(n))
    }

    fn table(&self, n: usize) -> Vec<C64> {
        let len = 1usize << n;
        match self {
            Formula::Const(c) => vec![*c; len],
            Formula::Var(i) => (0..len).map(|x| C64::new((x >> (n - i) & 1) as f64, 0.0)).collect(),
            Formula::Add(a, b) => {
                let mut t = a.table(n);
                t.iter_mut().zip(b.table(n)).for_each(|(x, y)| *x += y);
                t
            }
            Formula::Mul(a, b) => {
                let mut t = a.table(n);
                t.iter_mut().zip(b.table(n)).for_each(|(x, y)| *x *= y);
                t
            }
        }
    }

    /// Sparse multilinear expansion; fails if some product raises a
    /// variable to a power above one or the term count exceeds 2^22.
    pub fn expand(&self) -> Result<MultilinearPolynomial> {
        self.expand_rec()
    }

    fn expand_rec(&self) -> Result<MultilinearPolynomial> {
        Ok(match self {
            Formula::Const(c) => MultilinearPolynomial::constant(*c),
            Formula::Var(i) => MultilinearPolynomial::variable(*i),
            Formula::Add(a, b) => a.expand_rec()?.add(&b.expand_rec()?),
            Formula::Mul(a, b) => a.expand_rec()?.mul(&b.expand_rec()?)?,
        })
    }
}

/// Parses `(+ f g)`, `(* f g)`, `(var i)`, `(const C)`. Sums and products
/// with more than two operands associate to the left.
pub fn parse_formula(src: &str) -> Result<Formula> {
    to_formula(&parse_one(src)?)
}

fn to_formula(e: &SExpr) -> Result<Formula> {
    let SExpr::List(items, pos) = e else {
        return Err(syntax_err(e.pos(), "expected '('"));
    };
    let head = match items.first() {
        Some(SExpr::Atom(h, _)) => h.as_str(),
        _ => return Err(syntax_err(*pos, "missing operator")),
    };
    let atom = |i: usize| match items.get(i) {
        Some(SExpr::Atom(s, p)) => Ok((s.as_str(), *p)),
        Some(other) => Err(syntax_err(other.pos(), "expected an atom")),
        None => Err(syntax_err(*pos, "missing operand")),
    };
    match head {
        "var" | "const" if items.len() != 2 => Err(syntax_err(*pos, format!("{head} takes one operand"))),
        "var" => {
            let (s, p) = atom(1)?;
            let i = s
                .parse::<usize>()
                .ok()
                .filter(|i| (1..=64).contains(i))
                .ok_or_else(|| syntax_err(p, format!("bad variable index '{s}'")))?;
            Ok(Formula::Var(i))
        }
        "const" => {
            let (s, p) = atom(1)?;
            Ok(Formula::Const(parse_complex(s, p)?))
        }
        "+" | "*" => {
            if items.len() < 3 {
                return Err(syntax_err(*pos, format!("'{head}' needs at least two operands")));
            }
            let op = if head == "+" { Formula::add } else { Formula::mul };
            let mut acc = to_formula(&items[1])?;
            for it in &items[2..] {
                acc = op(acc, to_formula(it)?);
            }
            Ok(acc)
        }
        other => Err(syntax_err(items[0].pos(), format!("unknown operator '{other}'"))),
    }
}

pub fn serialize_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, &mut s);
    s.push('\n');
    s
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Const(c) => out.push_str(&format!("(const {})", format_complex(*c))),
        Formula::Var(i) => out.push_str(&format!("(var {i})")),
        Formula::Add(a, b) | Formula::Mul(a, b) => {
            out.push_str(if matches!(f, Formula::Add(..)) { "(+ " } else { "(* " });
            write_formula(a, out);
            out.push(' ');
            write_formula(b, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
pub(crate) mod testgen {
    use super::Formula;
    use crate::C64;
    use rand::Rng;

    /// Random syntactically multilinear formula with at most `leaves`
    /// leaves over the variables in `vars`.
    pub fn random_multilinear<R: Rng>(rng: &mut R, vars: &[usize], leaves: usize) -> Formula {
        if leaves <= 1 || vars.is_empty() {
            return if !vars.is_empty() && rng.gen_bool(0.7) {
                Formula::var(vars[rng.gen_range(0..vars.len())])
            } else {
                Formula::Const(C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)))
            };
        }
        let left = rng.gen_range(1..leaves);
        if rng.gen_bool(0.5) || vars.len() < 2 {
            Formula::add(
                random_multilinear(rng, vars, left),
                random_multilinear(rng, vars, leaves - left),
            )
        } else {
            let cut = rng.gen_range(1..vars.len());
            let mut vs = vars.to_vec();
            for i in (1..vs.len()).rev() {
                vs.swap(i, rng.gen_range(0..=i));
            }
            let (a, b) = vs.split_at(cut);
            Formula::mul(random_multilinear(rng, a, left), random_multilinear(rng, b, leaves - left))
        }
    }
}
