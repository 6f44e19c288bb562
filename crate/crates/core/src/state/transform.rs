use super::{evaluate_node, Node, NodeKind, QubitSet, StateTree};
use crate::linalg::CMatrix;
use crate::{Error, Result, C64, TOL};

/// A restriction `weight * node`. `node` is `None` once every qubit of the
/// vertex is fixed; a zero weight means the restriction vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct Restricted {
    pub weight: C64,
    pub node: Option<Node>,
}

impl Restricted {
    fn zero() -> Self {
        Restricted {
            weight: C64::new(0.0, 0.0),
            node: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.weight == C64::new(0.0, 0.0)
    }
}

fn check_qubit_list(n: usize, qubits: &[usize]) -> Result<QubitSet> {
    let mut seen = QubitSet::EMPTY;
    for &q in qubits {
        if q == 0 || q > n || q > 64 {
            return Err(Error::InvalidQubits(format!("qubit {q} outside 1..={n}")));
        }
        if seen.contains(q) {
            return Err(Error::InvalidQubits(format!("qubit {q} repeated")));
        }
        seen = seen.union(QubitSet::single(q));
    }
    Ok(seen)
}

/// Fixes the listed qubits. Remaining vertices keep their labels and linear
/// combinations are renormalized, the lost norm moving into `weight`.
pub fn restrict(tree: &StateTree, assignment: &[(usize, bool)]) -> Result<Restricted> {
    let qs: Vec<usize> = assignment.iter().map(|&(q, _)| q).collect();
    let fixed = check_qubit_list(tree.n, &qs)?;
    let ones = QubitSet::from_qubits(
        &assignment.iter().filter(|&&(_, b)| b).map(|&(q, _)| q).collect::<Vec<_>>(),
    );
    Ok(restrict_node(&tree.root, fixed, ones))
}

pub(crate) fn restrict_node(node: &Node, fixed: QubitSet, ones: QubitSet) -> Restricted {
    if node.set().is_disjoint(fixed) {
        return Restricted {
            weight: C64::new(1.0, 0.0),
            node: Some(node.clone()),
        };
    }
    match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => {
            let w = if ones.contains(*qubit) { *beta } else { *alpha };
            if w == C64::new(0.0, 0.0) {
                Restricted::zero()
            } else {
                Restricted { weight: w, node: None }
            }
        }
        NodeKind::Tensor(ch) => {
            let mut weight = C64::new(1.0, 0.0);
            let mut rest = Vec::new();
            for c in ch {
                let r = restrict_node(c, fixed, ones);
                if r.is_zero() {
                    return Restricted::zero();
                }
                weight *= r.weight;
                rest.extend(r.node);
            }
            let node = match rest.len() {
                0 => None,
                1 => rest.pop(),
                _ => Some(Node::tensor_raw(rest)),
            };
            Restricted { weight, node }
        }
        NodeKind::Plus(ch) => {
            let mut terms: Vec<(C64, Option<Node>)> = Vec::new();
            for (c, child) in ch {
                let r = restrict_node(child, fixed, ones);
                if !r.is_zero() {
                    terms.push((c * r.weight, r.node));
                }
            }
            if terms.is_empty() {
                return Restricted::zero();
            }
            if node.set().is_subset(fixed) {
                let w: C64 = terms.iter().map(|(w, _)| w).sum();
                return if w.norm() < 1e-14 {
                    Restricted::zero()
                } else {
                    Restricted { weight: w, node: None }
                };
            }
            if terms.len() == 1 {
                let (w, n) = terms.pop().unwrap();
                return Restricted { weight: w, node: n };
            }
            let dim = 1usize << node.set().minus(fixed).len();
            let mut acc = vec![C64::new(0.0, 0.0); dim];
            for (w, n) in &terms {
                let v = evaluate_node(n.as_ref().unwrap());
                for (a, b) in acc.iter_mut().zip(&v) {
                    *a += w * b;
                }
            }
            let norm = acc.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-14 {
                return Restricted::zero();
            }
            let children = terms.into_iter().map(|(w, n)| (w / norm, n.unwrap())).collect();
            Restricted {
                weight: C64::new(norm, 0.0),
                node: Some(Node::plus(children)),
            }
        }
    }
}

/// Tree for `U` applied to `qubits` (first listed qubit is the most
/// significant bit of `U`'s index).
pub fn apply_local_unitary(tree: &StateTree, u: &CMatrix, qubits: &[usize]) -> Result<StateTree> {
    let k = qubits.len();
    if k == 0 || k > 8 {
        return Err(Error::InvalidQubits(format!("{k} target qubits")));
    }
    let set = check_qubit_list(tree.n, qubits)?;
    if u.rows() != 1 << k || u.cols() != 1 << k {
        return Err(Error::Dimension(format!(
            "{}x{} matrix on {k} qubits",
            u.rows(),
            u.cols()
        )));
    }
    u.check_unitary(TOL)?;
    let bit_of = |y: usize, i: usize| y >> (k - 1 - i) & 1 == 1;
    let mut terms = Vec::new();
    for y in 0..1usize << k {
        let ones: Vec<usize> = (0..k).filter(|&i| bit_of(y, i)).map(|i| qubits[i]).collect();
        let r = restrict_node(&tree.root, set, QubitSet::from_qubits(&ones));
        if r.is_zero() {
            continue;
        }
        let s = if k == 1 {
            Node::leaf(qubits[0], u.get(0, y), u.get(1, y))
        } else {
            let parts: Vec<(C64, Node)> = (0..1usize << k)
                .filter(|&x| u.get(x, y).norm() > 0.0)
                .map(|x| {
                    let bits: Vec<bool> = (0..k).map(|i| bit_of(x, i)).collect();
                    (u.get(x, y), Node::product(qubits, &bits))
                })
                .collect();
            Node::plus(parts)
        };
        let node = match r.node {
            Some(t) => Node::tensor_raw(vec![s, t]),
            None => s,
        };
        terms.push((r.weight, node));
    }
    Ok(StateTree::new(tree.n, Node::plus(terms)))
}

/// Applies a one-qubit unitary to each listed qubit by rewriting leaves.
pub fn local_basis_change(tree: &StateTree, gates: &[(usize, CMatrix)]) -> Result<StateTree> {
    let qs: Vec<usize> = gates.iter().map(|(q, _)| *q).collect();
    check_qubit_list(tree.n, &qs)?;
    let mut table: Vec<Option<&CMatrix>> = vec![None; tree.n + 1];
    for (q, g) in gates {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(Error::Dimension(format!("{}x{} single-qubit gate", g.rows(), g.cols())));
        }
        g.check_unitary(TOL)?;
        table[*q] = Some(g);
    }
    Ok(StateTree::new(tree.n, map_leaves(&tree.root, &table)))
}

fn map_leaves(node: &Node, table: &[Option<&CMatrix>]) -> Node {
    match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => match table.get(*qubit).copied().flatten() {
            Some(g) => Node::leaf(
                *qubit,
                g.get(0, 0) * alpha + g.get(0, 1) * beta,
                g.get(1, 0) * alpha + g.get(1, 1) * beta,
            ),
            None => node.clone(),
        },
        NodeKind::Plus(ch) => Node::plus(ch.iter().map(|(c, n)| (*c, map_leaves(n, table))).collect()),
        NodeKind::Tensor(ch) => Node::tensor_raw(ch.iter().map(|n| map_leaves(n, table)).collect()),
    }
}
