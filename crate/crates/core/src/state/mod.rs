//! State trees: leaves, linear-combination vertices and tensor vertices.
//!
//! Qubits are labelled `1..=n`. Qubit 1 is the most significant bit of a
//! basis index, so amplitude `i` belongs to the bitstring of `i` written
//! with `n` binary digits.

mod amplitude;
mod dsl;
mod eval;
mod transform;

pub use amplitude::{eps_to_delta, fidelity, l2_distance2, AmplitudeVector};
pub use dsl::{parse_tree, serialize_tree};
pub use eval::{classify, evaluate, evaluate_node, validate, Rule, TreeClass, Violation};
pub use transform::{apply_local_unitary, local_basis_change, restrict, Restricted};

pub(crate) use eval::scatter_table;

use crate::C64;

/// Set of qubit labels in `1..=64`, bit `q - 1` for qubit `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitSet(u64);

impl QubitSet {
    pub const EMPTY: QubitSet = QubitSet(0);

    pub fn from_bits(bits: u64) -> Self {
        QubitSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(q: usize) -> Self {
        assert!((1..=64).contains(&q), "qubit {q} out of range");
        QubitSet(1u64 << (q - 1))
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= 64);
        if n == 64 {
            QubitSet(u64::MAX)
        } else {
            QubitSet((1u64 << n) - 1)
        }
    }

    pub fn from_qubits(qs: &[usize]) -> Self {
        qs.iter().fold(Self::EMPTY, |s, &q| s.union(Self::single(q)))
    }

    pub fn contains(self, q: usize) -> bool {
        (1..=64).contains(&q) && self.0 >> (q - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        QubitSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        QubitSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        QubitSet(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    /// Largest label, 0 for the empty set.
    pub fn max(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Labels in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut b = self.0;
        std::iter::from_fn(move || {
            if b == 0 {
                None
            } else {
                let q = b.trailing_zeros() as usize + 1;
                b &= b - 1;
                Some(q)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Display for QubitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Leaf { qubit: usize, alpha: C64, beta: C64 },
    Plus(Vec<(C64, Node)>),
    Tensor(Vec<Node>),
}

/// A tree vertex together with its qubit set.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    set: QubitSet,
    kind: NodeKind,
}

impl Node {
    /// `alpha|0> + beta|1>` on qubit `q`.
    pub fn leaf(qubit: usize, alpha: C64, beta: C64) -> Node {
        Node {
            set: QubitSet::single(qubit),
            kind: NodeKind::Leaf { qubit, alpha, beta },
        }
    }

    pub fn basis(qubit: usize, bit: bool) -> Node {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        if bit {
            Node::leaf(qubit, zero, one)
        } else {
            Node::leaf(qubit, one, zero)
        }
    }

    /// `|+>` on qubit `q`.
    pub fn plus_state(qubit: usize) -> Node {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Node::leaf(qubit, h, h)
    }

    pub fn plus(children: Vec<(C64, Node)>) -> Node {
        let set = children.iter().fold(QubitSet::EMPTY, |s, (_, c)| s.union(c.set));
        Node {
            set,
            kind: NodeKind::Plus(children),
        }
    }

    /// Tensor vertex; nested tensor children are flattened and a single
    /// child is returned unchanged.
    pub fn tensor(children: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c.kind {
                NodeKind::Tensor(inner) => flat.extend(inner),
                _ => flat.push(c),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Node::tensor_raw(flat)
    }

    /// Tensor vertex exactly as given.
    pub fn tensor_raw(children: Vec<Node>) -> Node {
        let set = children.iter().fold(QubitSet::EMPTY, |s, c| s.union(c.set));
        Node {
            set,
            kind: NodeKind::Tensor(children),
        }
    }

    /// Classical product state on `qubits`, bit `i` of the pattern taken from
    /// `bits[i]`.
    pub fn product(qubits: &[usize], bits: &[bool]) -> Node {
        assert_eq!(qubits.len(), bits.len());
        Node::tensor(qubits.iter().zip(bits).map(|(&q, &b)| Node::basis(q, b)).collect())
    }

    pub fn set(&self) -> QubitSet {
        self.set
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn into_kind(self) -> NodeKind {
        self.kind
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match &self.kind {
            NodeKind::Leaf { .. } => 1,
            NodeKind::Plus(ch) => ch.iter().map(|(_, c)| c.size()).sum(),
            NodeKind::Tensor(ch) => ch.iter().map(Node::size).sum(),
        }
    }

    /// Gates on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match &self.kind {
            NodeKind::Leaf { .. } => 0,
            NodeKind::Plus(ch) => 1 + ch.iter().map(|(_, c)| c.depth()).max().unwrap_or(0),
            NodeKind::Tensor(ch) => 1 + ch.iter().map(Node::depth).max().unwrap_or(0),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateTree {
    pub n: usize,
    pub root: Node,
}

impl StateTree {
    pub fn new(n: usize, root: Node) -> Self {
        StateTree { n, root }
    }

    /// Uses the largest qubit label as `n`.
    pub fn from_root(root: Node) -> Self {
        StateTree {
            n: root.set().max(),
            root,
        }
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }
}
