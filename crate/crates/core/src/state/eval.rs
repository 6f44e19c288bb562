use super::{AmplitudeVector, Node, NodeKind, QubitSet, StateTree};
use crate::{error::check_qubits, Error, Result, C64, TOL};

/// Maps each local index over `sub` to the local index over `sup`.
///
/// Local indices order the set ascending with the smallest label as the most
/// significant bit.
pub(crate) fn scatter_table(sub: QubitSet, sup: QubitSet) -> Vec<usize> {
    debug_assert!(sub.is_subset(sup));
    let m = sup.len();
    let k = sub.len();
    let labels = sub.to_vec();
    // posmap[b] is the sup position of the sub element stored at local bit b.
    let posmap: Vec<usize> = (0..k)
        .map(|b| {
            let q = labels[k - 1 - b];
            let rank = sup.intersection(QubitSet::from_bits((1u64 << (q - 1)) - 1)).len();
            1usize << (m - 1 - rank)
        })
        .collect();
    let mut table = vec![0usize; 1 << k];
    for i in 1..table.len() {
        table[i] = table[i & (i - 1)] | posmap[i.trailing_zeros() as usize];
    }
    table
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    QubitOutOfRange,
    RootQubitsetNotFull,
    PlusChildrenQubitsetMismatch,
    TensorChildrenOverlap,
    VertexNotNormalized,
    EmptyGate,
    ExceedsMaxQubits,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::QubitOutOfRange => "qubit-out-of-range",
            Rule::RootQubitsetNotFull => "root-qubitset-not-full",
            Rule::PlusChildrenQubitsetMismatch => "plus-children-qubitset-mismatch",
            Rule::TensorChildrenOverlap => "tensor-children-overlap",
            Rule::VertexNotNormalized => "vertex-not-normalized",
            Rule::EmptyGate => "empty-gate",
            Rule::ExceedsMaxQubits => "exceeds-max-qubits",
        }
    }
}

/// A failed check at the vertex reached by following child indices `path`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub measured: Option<f64>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let path: Vec<String> = self.path.iter().map(|p| p.to_string()).collect();
        let path = if path.is_empty() { "root".to_string() } else { path.join(".") };
        write!(f, "{} at {}", self.rule.as_str(), path)?;
        if let Some(m) = self.measured {
            write!(f, " (measured {m:.6e})")?;
        }
        Ok(())
    }
}

/// Local amplitude vector of a vertex over its own qubit set, no checks.
pub fn evaluate_node(node: &Node) -> Vec<C64> {
    let mut sink = Vec::new();
    walk(node, &mut Vec::new(), &mut sink, usize::MAX, false)
}

fn flag(out: &mut Vec<Violation>, rule: Rule, measured: Option<f64>, path: &[usize]) {
    out.push(Violation {
        path: path.to_vec(),
        rule,
        measured,
    });
}

fn zeros(set: QubitSet) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); 1 << set.len()]
}

fn walk(node: &Node, path: &mut Vec<usize>, out: &mut Vec<Violation>, n: usize, check: bool) -> Vec<C64> {
    let v = match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => {
            if check && *qubit > n {
                flag(out, Rule::QubitOutOfRange, Some(*qubit as f64), path);
            }
            vec![*alpha, *beta]
        }
        NodeKind::Plus(children) => {
            if children.is_empty() {
                if check {
                    flag(out, Rule::EmptyGate, None, path);
                }
                return Vec::new();
            }
            let mut acc = zeros(node.set());
            let mut ok = true;
            for (i, (c, child)) in children.iter().enumerate() {
                path.push(i);
                let cv = walk(child, path, out, n, check);
                path.pop();
                if child.set() != node.set() {
                    ok = false;
                    if check {
                        flag(out, Rule::PlusChildrenQubitsetMismatch, Some(i as f64), path);
                    }
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(&cv) {
                    *a += c * b;
                }
            }
            if !ok {
                return zeros(node.set());
            }
            acc
        }
        NodeKind::Tensor(children) => {
            if children.is_empty() {
                if check {
                    flag(out, Rule::EmptyGate, None, path);
                }
                return Vec::new();
            }
            let mut acc = vec![C64::new(1.0, 0.0)];
            let mut acc_set = QubitSet::EMPTY;
            let mut ok = true;
            for (i, child) in children.iter().enumerate() {
                path.push(i);
                let cv = walk(child, path, out, n, check);
                path.pop();
                if !ok {
                    continue;
                }
                if !acc_set.is_disjoint(child.set()) {
                    ok = false;
                    if check {
                        flag(out, Rule::TensorChildrenOverlap, Some(i as f64), path);
                    }
                    continue;
                }
                let new_set = acc_set.union(child.set());
                let ta = scatter_table(acc_set, new_set);
                let tb = scatter_table(child.set(), new_set);
                let mut next = zeros(new_set);
                for (ia, a) in acc.iter().enumerate() {
                    if *a == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (ib, b) in cv.iter().enumerate() {
                        next[ta[ia] | tb[ib]] = a * b;
                    }
                }
                acc = next;
                acc_set = new_set;
            }
            if !ok {
                return zeros(node.set());
            }
            acc
        }
    };
    if check {
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL {
            flag(out, Rule::VertexNotNormalized, Some(norm), path);
        }
    }
    v
}

fn check_root(tree: &StateTree, max_qubits: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    if tree.n > max_qubits {
        out.push(Violation {
            path: vec![],
            rule: Rule::ExceedsMaxQubits,
            measured: Some(tree.n as f64),
        });
    }
    if tree.n > 64 || tree.root.set() != QubitSet::full(tree.n.min(64)) {
        out.push(Violation {
            path: vec![],
            rule: Rule::RootQubitsetNotFull,
            measured: None,
        });
    }
    out
}

/// Every violated rule. An empty list means the tree is valid.
pub fn validate(tree: &StateTree, max_qubits: usize) -> Vec<Violation> {
    let mut out = check_root(tree, max_qubits);
    if out.iter().any(|v| v.rule == Rule::ExceedsMaxQubits) {
        // Structure only; dense vectors would be too large.
        structural(&tree.root, &mut Vec::new(), tree.n, &mut out);
        return out;
    }
    walk(&tree.root, &mut Vec::new(), &mut out, tree.n, true);
    out
}

fn structural(node: &Node, path: &mut Vec<usize>, n: usize, out: &mut Vec<Violation>) {
    match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => {
            if *qubit > n {
                flag(out, Rule::QubitOutOfRange, Some(*qubit as f64), path);
            }
            let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
            if (norm - 1.0).abs() > TOL {
                flag(out, Rule::VertexNotNormalized, Some(norm), path);
            }
        }
        NodeKind::Plus(ch) => {
            if ch.is_empty() {
                flag(out, Rule::EmptyGate, None, path);
            }
            for (i, (_, c)) in ch.iter().enumerate() {
                if c.set() != node.set() {
                    flag(out, Rule::PlusChildrenQubitsetMismatch, Some(i as f64), path);
                }
                path.push(i);
                structural(c, path, n, out);
                path.pop();
            }
        }
        NodeKind::Tensor(ch) => {
            if ch.is_empty() {
                flag(out, Rule::EmptyGate, None, path);
            }
            let mut seen = QubitSet::EMPTY;
            for (i, c) in ch.iter().enumerate() {
                if !seen.is_disjoint(c.set()) {
                    flag(out, Rule::TensorChildrenOverlap, Some(i as f64), path);
                }
                seen = seen.union(c.set());
                path.push(i);
                structural(c, path, n, out);
                path.pop();
            }
        }
    }
}

/// Dense amplitude vector of a valid tree.
pub fn evaluate(tree: &StateTree, max_qubits: usize) -> Result<AmplitudeVector> {
    check_qubits("evaluation", tree.n, max_qubits)?;
    let mut out = check_root(tree, max_qubits);
    let v = walk(&tree.root, &mut Vec::new(), &mut out, tree.n, true);
    if let Some(first) = out.first() {
        return Err(Error::InvalidTree(first.to_string()));
    }
    AmplitudeVector::new(tree.n, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TreeClass {
    General,
    Orthogonal,
    ManifestlyOrthogonal,
}

impl TreeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeClass::General => "general",
            TreeClass::Orthogonal => "orthogonal",
            TreeClass::ManifestlyOrthogonal => "manifestly-orthogonal",
        }
    }
}

/// Strongest class the tree belongs to. Children with a zero coefficient
/// are ignored.
pub fn classify(tree: &StateTree, max_qubits: usize) -> Result<TreeClass> {
    evaluate(tree, max_qubits)?;
    let mut class = TreeClass::ManifestlyOrthogonal;
    classify_walk(&tree.root, &mut class);
    Ok(class)
}

fn classify_walk(node: &Node, class: &mut TreeClass) -> Vec<C64> {
    match node.kind() {
        NodeKind::Leaf { alpha, beta, .. } => vec![*alpha, *beta],
        NodeKind::Tensor(ch) => {
            for c in ch {
                classify_walk(c, class);
            }
            evaluate_node(node)
        }
        NodeKind::Plus(ch) => {
            let vecs: Vec<(C64, Vec<C64>)> = ch.iter().map(|(c, n)| (*c, classify_walk(n, class))).collect();
            let live: Vec<&Vec<C64>> = vecs.iter().filter(|(c, _)| c.norm() > 0.0).map(|(_, v)| v).collect();
            if *class == TreeClass::ManifestlyOrthogonal {
                let len = live.first().map_or(0, |v| v.len());
                let disjoint = (0..len).all(|x| live.iter().filter(|v| v[x].norm() > TOL).count() <= 1);
                if !disjoint {
                    *class = TreeClass::Orthogonal;
                }
            }
            if *class == TreeClass::Orthogonal {
                'outer: for i in 0..live.len() {
                    for j in i + 1..live.len() {
                        let ip: C64 = live[i].iter().zip(live[j]).map(|(a, b)| a.conj() * b).sum();
                        if ip.norm() >= TOL {
                            *class = TreeClass::General;
                            break 'outer;
                        }
                    }
                }
            }
            let mut acc = vec![C64::new(0.0, 0.0); 1 << node.set().len()];
            for (c, v) in &vecs {
                for (a, b) in acc.iter_mut().zip(v) {
                    *a += c * b;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn scatter_into_superset() {
        let sup = QubitSet::from_qubits(&[1, 2, 3]);
        let sub = QubitSet::from_qubits(&[1, 3]);
        // sub index bits (q1, q3) -> sup bits (q1, q2, q3)
        assert_eq!(scatter_table(sub, sup), vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(scatter_table(QubitSet::single(2), sup), vec![0, 0b010]);
    }

    #[test]
    fn tensor_puts_low_labels_first() {
        let t = StateTree::from_root(Node::tensor(vec![Node::basis(2, true), Node::basis(1, false)]));
        let v = evaluate(&t, 20).unwrap();
        assert_eq!(v.amps()[0b01], r(1.0));
    }

    #[test]
    fn validation_rules_fire() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bad = StateTree::new(
            2,
            Node::plus(vec![(r(h), Node::basis(1, false)), (r(h), Node::basis(2, true))]),
        );
        let rules: Vec<Rule> = validate(&bad, 20).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::PlusChildrenQubitsetMismatch));

        let overlap = StateTree::new(1, Node::tensor_raw(vec![Node::basis(1, false), Node::basis(1, true)]));
        assert!(validate(&overlap, 20).iter().any(|v| v.rule == Rule::TensorChildrenOverlap));

        let unnorm = StateTree::new(1, Node::leaf(1, r(1.0), r(1.0)));
        let v = validate(&unnorm, 20);
        assert_eq!(v[0].rule, Rule::VertexNotNormalized);
        assert!((v[0].measured.unwrap() - 2f64.sqrt()).abs() < 1e-12);

        let notfull = StateTree::new(2, Node::basis(1, false));
        assert_eq!(validate(&notfull, 20)[0].rule, Rule::RootQubitsetNotFull);

        let out = StateTree::new(1, Node::tensor(vec![Node::basis(1, false), Node::basis(2, false)]));
        let rules: Vec<Rule> = validate(&out, 20).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::QubitOutOfRange));

        let empty = StateTree::new(0, Node::plus(vec![]));
        assert!(validate(&empty, 20).iter().any(|v| v.rule == Rule::EmptyGate));

        let big = StateTree::new(3, Node::product(&[1, 2, 3], &[false; 3]));
        assert!(validate(&big, 2).iter().any(|v| v.rule == Rule::ExceedsMaxQubits));
        assert!(matches!(evaluate(&big, 2), Err(Error::Oversize { .. })));
    }

    #[test]
    fn nested_plus_normalization_is_checked_per_vertex() {
        // Root normalized, inner vertex not.
        let inner = Node::plus(vec![(r(2.0), Node::basis(1, false))]);
        let t = StateTree::new(1, Node::plus(vec![(r(0.5), inner)]));
        let v = validate(&t, 20);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, vec![0]);
    }

    #[test]
    fn classes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mo = StateTree::new(1, Node::plus(vec![(r(h), Node::basis(1, false)), (r(h), Node::basis(1, true))]));
        assert_eq!(classify(&mo, 20).unwrap(), TreeClass::ManifestlyOrthogonal);
        // |+> and |-> are orthogonal with overlapping supports.
        let minus = Node::leaf(1, r(h), r(-h));
        let o = StateTree::new(1, Node::plus(vec![(r(h), Node::plus_state(1)), (r(h), minus)]));
        assert_eq!(classify(&o, 20).unwrap(), TreeClass::Orthogonal);
        // |0> + |+>, renormalized.
        let c = 1.0 / (2.0 + 2.0 * h).sqrt();
        let g = StateTree::new(1, Node::plus(vec![(r(c), Node::basis(1, false)), (r(c), Node::plus_state(1))]));
        assert_eq!(classify(&g, 20).unwrap(), TreeClass::General);
    }
}
