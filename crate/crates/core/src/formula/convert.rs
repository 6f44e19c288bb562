//! Conversions between state trees, formulas and function tables.

use super::{make_syntactic, Formula};
use crate::state::{scatter_table, AmplitudeVector, Node, NodeKind, QubitSet, StateTree};
use crate::{error::check_qubits, Error, Result, C64, DEFAULT_MAX_QUBITS};

/// Function values on `{0,1}^n`, indexed like amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable {
    pub n: usize,
    pub values: Vec<C64>,
}

pub fn state_to_function(v: &AmplitudeVector) -> FunctionTable {
    FunctionTable {
        n: v.n(),
        values: v.amps().to_vec(),
    }
}

/// Normalized state proportional to the table.
pub fn function_to_state(t: &FunctionTable) -> Result<AmplitudeVector> {
    AmplitudeVector::new(t.n, t.values.clone())?.normalized()
}

/// Formula whose value at `x` is the amplitude of `x`. Edge coefficients
/// are pushed down onto the leaves, where `alpha|0> + beta|1>` on qubit `i`
/// becomes `alpha (1 - x_i) + beta x_i`.
pub fn tree_to_formula(tree: &StateTree) -> Formula {
    node_formula(&tree.root, C64::new(1.0, 0.0))
}

fn node_formula(node: &Node, scale: C64) -> Formula {
    match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => {
            let (a, b) = (scale * alpha, scale * beta);
            let zero = C64::new(0.0, 0.0);
            let one = C64::new(1.0, 0.0);
            let low = Formula::mul(Formula::Const(a), Formula::not_var(*qubit));
            let high = if b == one {
                Formula::var(*qubit)
            } else {
                Formula::mul(Formula::Const(b), Formula::var(*qubit))
            };
            match (a == zero, b == zero) {
                (true, true) => Formula::Const(zero),
                (true, false) => high,
                (false, true) => low,
                (false, false) => Formula::add(low, high),
            }
        }
        NodeKind::Plus(ch) => Formula::fold_balanced(
            ch.iter().map(|(c, n)| node_formula(n, scale * c)).collect(),
            Formula::add,
        ),
        NodeKind::Tensor(ch) => Formula::fold_balanced(
            ch.iter()
                .enumerate()
                .map(|(i, n)| node_formula(n, if i == 0 { scale } else { C64::new(1.0, 0.0) }))
                .collect(),
            Formula::mul,
        ),
    }
}

/// A built vertex: `coef * node`, with `vec` the node's local vector.
enum Built {
    Zero,
    Scalar(C64),
    State { coef: C64, node: Node, vec: Vec<C64> },
}

const ZERO_NORM: f64 = 1e-12;

/// Normalized state tree whose amplitudes are proportional to `f`.
pub fn formula_to_tree(f: &Formula, n: usize) -> Result<StateTree> {
    check_qubits("formula conversion", n, DEFAULT_MAX_QUBITS)?;
    if n == 0 {
        return Err(Error::InvalidParameter("no variables".into()));
    }
    if f.vars().max() > n {
        return Err(Error::Dimension(format!("formula uses x_{} with n = {n}", f.vars().max())));
    }
    let g = make_syntactic(f)?;
    match build(&g, QubitSet::full(n)) {
        Built::State { coef, node, .. } => {
            let norm = coef.norm();
            if norm < ZERO_NORM {
                return Err(Error::ZeroFunction);
            }
            let phase = coef / norm;
            let root = if (phase - 1.0).norm() > 1e-12 {
                Node::plus(vec![(phase, node)])
            } else {
                node
            };
            Ok(StateTree::new(n, root))
        }
        _ => Err(Error::ZeroFunction),
    }
}

/// `|+>` on every qubit of `set`, with the factor turning it into the
/// all-ones function.
fn ones(set: QubitSet) -> (C64, Node) {
    let node = Node::tensor(set.iter().map(Node::plus_state).collect());
    (C64::new(2f64.powf(set.len() as f64 / 2.0), 0.0), node)
}

fn tensor_vec(a: &[C64], sa: QubitSet, b: &[C64], sb: QubitSet) -> Vec<C64> {
    let s = sa.union(sb);
    let (ta, tb) = (scatter_table(sa, s), scatter_table(sb, s));
    let mut out = vec![C64::new(0.0, 0.0); 1 << s.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[ta[i] | tb[j]] = x * y;
        }
    }
    out
}

fn pad(b: Built, have: QubitSet, want: QubitSet) -> Built {
    let extra = want.minus(have);
    if extra.is_empty() {
        return b;
    }
    let (oc, on) = ones(extra);
    let ov = vec![C64::new(1.0 / 2f64.powf(extra.len() as f64 / 2.0), 0.0); 1 << extra.len()];
    match b {
        Built::Zero => Built::Zero,
        Built::Scalar(c) => {
            if c.norm() < ZERO_NORM {
                Built::Zero
            } else {
                Built::State {
                    coef: c * oc,
                    node: on,
                    vec: ov,
                }
            }
        }
        Built::State { coef, node, vec } => Built::State {
            coef: coef * oc,
            vec: tensor_vec(&vec, node.set(), &ov, extra),
            node: Node::tensor(vec![node, on]),
        },
    }
}

/// Builds `f` as a state over exactly the set `target` (a superset of its
/// variables).
fn build(f: &Formula, target: QubitSet) -> Built {
    let s = f.vars();
    let core = if s.is_empty() {
        Built::Scalar(f.eval(&[]).expect("constant formula"))
    } else if s.len() == 1 {
        // a + b x collapses to a leaf (a, a + b).
        let q = s.min().unwrap();
        let mut point = vec![C64::new(0.0, 0.0); q];
        let a0 = f.eval(&point).unwrap();
        point[q - 1] = C64::new(1.0, 0.0);
        let a1 = f.eval(&point).unwrap();
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm < ZERO_NORM {
            Built::Zero
        } else {
            Built::State {
                coef: C64::new(norm, 0.0),
                node: Node::leaf(q, a0 / norm, a1 / norm),
                vec: vec![a0 / norm, a1 / norm],
            }
        }
    } else {
        match f {
            Formula::Add(a, b) => {
                let (ba, bb) = (build(a, s), build(b, s));
                match (ba, bb) {
                    (Built::Zero, x) | (x, Built::Zero) => x,
                    (
                        Built::State { coef: ca, node: na, vec: va },
                        Built::State { coef: cb, node: nb, vec: vb },
                    ) => {
                        let vec: Vec<C64> = va.iter().zip(&vb).map(|(x, y)| ca * x + cb * y).collect();
                        let norm = vec.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                        if norm < ZERO_NORM {
                            Built::Zero
                        } else {
                            Built::State {
                                coef: C64::new(norm, 0.0),
                                node: Node::plus(vec![(ca / norm, na), (cb / norm, nb)]),
                                vec: vec.iter().map(|x| x / norm).collect(),
                            }
                        }
                    }
                    _ => unreachable!("padded sums are states"),
                }
            }
            Formula::Mul(a, b) => {
                let (sa, sb) = (a.vars(), b.vars());
                match (build(a, sa), build(b, sb)) {
                    (Built::Zero, _) | (_, Built::Zero) => Built::Zero,
                    (Built::Scalar(x), Built::Scalar(y)) => Built::Scalar(x * y),
                    (Built::Scalar(x), Built::State { coef, node, vec })
                    | (Built::State { coef, node, vec }, Built::Scalar(x)) => {
                        if (x * coef).norm() < ZERO_NORM {
                            Built::Zero
                        } else {
                            Built::State { coef: x * coef, node, vec }
                        }
                    }
                    (
                        Built::State { coef: ca, node: na, vec: va },
                        Built::State { coef: cb, node: nb, vec: vb },
                    ) => Built::State {
                        coef: ca * cb,
                        vec: tensor_vec(&va, na.set(), &vb, nb.set()),
                        node: Node::tensor(vec![na, nb]),
                    },
                }
            }
            _ => unreachable!("leaves have at most one variable"),
        }
    };
    pad(core, s, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_cat, build_figure2_tree, build_parity, build_parity_fourier};
    use crate::state::{evaluate, fidelity, validate};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn leaf_formula() {
        let t = StateTree::new(1, Node::leaf(1, r(0.6), r(0.8)));
        let f = tree_to_formula(&t);
        assert_eq!(f.eval_table(1).unwrap(), vec![r(0.6), r(0.8)]);
    }

    #[test]
    fn figure2_values() {
        let f = tree_to_formula(&build_figure2_tree());
        let t = f.eval_table(2).unwrap();
        for (a, e) in t.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((a - r(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn product_formula_gives_basis_state() {
        let t = formula_to_tree(&Formula::mul(Formula::var(1), Formula::var(2)), 2).unwrap();
        assert!(validate(&t, 20).is_empty());
        let v = evaluate(&t, 20).unwrap();
        assert!((v.amps()[3] - r(1.0)).norm() < 1e-12);
        assert!(matches!(formula_to_tree(&Formula::real(0.0), 2), Err(Error::ZeroFunction)));
        let cancel = Formula::sub(Formula::var(1), Formula::var(1));
        assert!(matches!(formula_to_tree(&cancel, 1), Err(Error::ZeroFunction)));
    }

    #[test]
    fn round_trips() {
        for t in [
            build_cat(5).unwrap(),
            build_parity(4, 1).unwrap(),
            build_parity_fourier(3, 1).unwrap(),
            build_figure2_tree(),
        ] {
            let f = tree_to_formula(&t);
            let v = evaluate(&t, 20).unwrap();
            for (a, b) in f.eval_table(t.n).unwrap().iter().zip(v.amps()) {
                assert!((a - b).norm() < 1e-12);
            }
            let back = formula_to_tree(&f, t.n).unwrap();
            assert!(validate(&back, 20).is_empty());
            let w = evaluate(&back, 20).unwrap();
            assert!(fidelity(&v, &w).unwrap() > 1.0 - 1e-9);
            assert!(crate::state::l2_distance2(&v, &w).unwrap() < 1e-18);
        }
    }

    #[test]
    fn unnormalized_and_phased_inputs() {
        // 2i (1 - x1) x2  ->  i |01>
        let f = Formula::mul(Formula::mul(Formula::Const(C64::new(0.0, 2.0)), Formula::not_var(1)), Formula::var(2));
        let t = formula_to_tree(&f, 3).unwrap();
        let v = evaluate(&t, 20).unwrap();
        assert!((v.amps()[0b010] - C64::new(0.0, 1.0 / 2f64.sqrt())).norm() < 1e-12);
        assert!((v.amps()[0b011] - C64::new(0.0, 1.0 / 2f64.sqrt())).norm() < 1e-12);
        let tab = FunctionTable { n: 2, values: vec![r(1.0); 4] };
        let s = function_to_state(&tab).unwrap();
        assert!((s.amps()[2] - r(0.5)).norm() < 1e-15);
        assert_eq!(state_to_function(&s).values, s.amps());
        assert!(function_to_state(&FunctionTable { n: 1, values: vec![r(0.0); 2] }).is_err());
    }
}
