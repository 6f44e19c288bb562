//! State-preparation circuits compiled from orthogonal trees.
//!
//! Wires are numbered from 1. Data wire `q` carries tree qubit `q`;
//! ancillas follow the data wires. Wire 1 is the most significant bit of
//! a simulated basis index.

mod sim;
mod text;

use std::collections::BTreeSet;

pub use sim::simulate;
pub use text::{parse_circuit, serialize_circuit};

use crate::linalg::CMatrix;
use crate::state::{classify, evaluate, fidelity, AmplitudeVector, Node, NodeKind, StateTree, TreeClass};
use crate::{Error, Result, C64, DEFAULT_MAX_QUBITS, TOL};

/// Most qubits a simulated circuit may touch.
pub const MAX_WIRES: usize = 20;
/// Most qubits a `Unitary` gate may act on.
pub const MAX_UNITARY_QUBITS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Maps `|0>` to `alpha|0> + beta|1>`; only valid on a `|0>` wire.
    Prep { qubit: usize, alpha: C64, beta: C64 },
    /// The first listed wire is the most significant bit of the matrix index.
    Unitary { qubits: Vec<usize>, matrix: CMatrix },
    /// `body` runs on the subspace where `control` equals `polarity`.
    ControlledSub {
        control: usize,
        polarity: bool,
        body: Vec<Gate>,
    },
    /// Flips `target` when any wire of `register` is 1.
    OrNot { target: usize, register: Vec<usize> },
}

impl Gate {
    fn wires(&self, out: &mut BTreeSet<usize>) {
        match self {
            Gate::Prep { qubit, .. } => {
                out.insert(*qubit);
            }
            Gate::Unitary { qubits, .. } => out.extend(qubits),
            Gate::ControlledSub { control, body, .. } => {
                out.insert(*control);
                for g in body {
                    g.wires(out);
                }
            }
            Gate::OrNot { target, register } => {
                out.insert(*target);
                out.extend(register);
            }
        }
    }

    /// Inverse gate. `Prep` becomes the adjoint of its unitary completion.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Prep { qubit, alpha, beta } => Gate::Unitary {
                qubits: vec![*qubit],
                matrix: prep_unitary(*alpha, *beta).adjoint(),
            },
            Gate::Unitary { qubits, matrix } => Gate::Unitary {
                qubits: qubits.clone(),
                matrix: matrix.adjoint(),
            },
            Gate::ControlledSub { control, polarity, body } => Gate::ControlledSub {
                control: *control,
                polarity: *polarity,
                body: invert_gates(body),
            },
            Gate::OrNot { .. } => self.clone(),
        }
    }
}

/// Unitary with first column `(alpha, beta)`.
pub fn prep_unitary(alpha: C64, beta: C64) -> CMatrix {
    CMatrix::from_vec(2, 2, vec![alpha, -beta.conj(), beta, alpha.conj()]).expect("2x2")
}

/// Replaces every `Prep` by its unitary completion so the gates act
/// correctly on arbitrary inputs.
fn unitaryize(gates: Vec<Gate>) -> Vec<Gate> {
    gates
        .into_iter()
        .map(|g| match g {
            Gate::Prep { qubit, alpha, beta } => Gate::Unitary {
                qubits: vec![qubit],
                matrix: prep_unitary(alpha, beta),
            },
            Gate::ControlledSub { control, polarity, body } => Gate::ControlledSub {
                control,
                polarity,
                body: unitaryize(body),
            },
            g => g,
        })
        .collect()
}

fn invert_gates(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

fn count_gates(gates: &[Gate]) -> usize {
    gates
        .iter()
        .map(|g| match g {
            Gate::ControlledSub { body, .. } => count_gates(body),
            _ => 1,
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_data: usize,
    pub n_ancilla: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_data: usize, n_ancilla: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            n_data,
            n_ancilla,
            gates,
        }
    }

    pub fn n_wires(&self) -> usize {
        self.n_data + self.n_ancilla
    }

    /// Primitive gates, counting the bodies of controlled blocks.
    pub fn gate_count(&self) -> usize {
        count_gates(&self.gates)
    }

    /// `self` followed by `other` on the same wires.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_data != other.n_data || self.n_ancilla != other.n_ancilla {
            return Err(Error::Dimension("circuits act on different wires".into()));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit::new(self.n_data, self.n_ancilla, gates))
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_block(&self.gates, &BTreeSet::new())
    }

    fn validate_block(&self, gates: &[Gate], controls: &BTreeSet<usize>) -> Result<()> {
        let total = self.n_wires();
        let wire_ok = |w: usize| -> Result<()> {
            if w == 0 || w > total {
                return Err(Error::InvalidQubits(format!("wire {w} outside 1..={total}")));
            }
            if controls.contains(&w) {
                return Err(Error::InvalidQubits(format!("wire {w} is a control of an enclosing block")));
            }
            Ok(())
        };
        let distinct = |ws: &[usize]| -> Result<()> {
            let s: BTreeSet<_> = ws.iter().collect();
            if s.len() != ws.len() {
                return Err(Error::InvalidQubits(format!("repeated wire in {ws:?}")));
            }
            Ok(())
        };
        for g in gates {
            match g {
                Gate::Prep { qubit, alpha, beta } => {
                    wire_ok(*qubit)?;
                    let norm = alpha.norm_sqr() + beta.norm_sqr();
                    if (norm - 1.0).abs() > TOL {
                        return Err(Error::InvalidParameter(format!("prep amplitudes have norm {norm}")));
                    }
                }
                Gate::Unitary { qubits, matrix } => {
                    if qubits.is_empty() || qubits.len() > MAX_UNITARY_QUBITS {
                        return Err(Error::InvalidQubits(format!("unitary on {} wires", qubits.len())));
                    }
                    qubits.iter().try_for_each(|&w| wire_ok(w))?;
                    distinct(qubits)?;
                    let d = 1 << qubits.len();
                    if matrix.rows() != d || matrix.cols() != d {
                        return Err(Error::Dimension(format!("{}x{} matrix on {} wires", matrix.rows(), matrix.cols(), qubits.len())));
                    }
                    matrix.check_unitary(TOL)?;
                }
                Gate::ControlledSub { control, body, .. } => {
                    wire_ok(*control)?;
                    let mut inner = controls.clone();
                    inner.insert(*control);
                    self.validate_block(body, &inner)?;
                }
                Gate::OrNot { target, register } => {
                    wire_ok(*target)?;
                    for &w in register {
                        if w == 0 || w > total {
                            return Err(Error::InvalidQubits(format!("wire {w} outside 1..={total}")));
                        }
                    }
                    let mut all = register.clone();
                    all.push(*target);
                    distinct(&all)?;
                }
            }
        }
        Ok(())
    }
}

/// Reverses the gate order and inverts every gate.
pub fn invert(c: &Circuit) -> Circuit {
    Circuit::new(c.n_data, c.n_ancilla, invert_gates(&c.gates))
}

/// Norm of the state a vertex represents, assuming the children of every
/// `+` vertex are orthogonal.
fn node_norm(node: &Node) -> f64 {
    match node.kind() {
        NodeKind::Leaf { alpha, beta, .. } => (alpha.norm_sqr() + beta.norm_sqr()).sqrt(),
        NodeKind::Tensor(ch) => ch.iter().map(node_norm).product(),
        NodeKind::Plus(ch) => ch
            .iter()
            .map(|(c, n)| c.norm_sqr() * node_norm(n).powi(2))
            .sum::<f64>()
            .sqrt(),
    }
}

struct Compiler {
    n_data: usize,
    max_level: usize,
}

impl Compiler {
    fn ancilla(&mut self, level: usize) -> usize {
        self.max_level = self.max_level.max(level + 1);
        self.n_data + 1 + level
    }

    /// Gates preparing `node / |node|`; ancillas from `level` up are free.
    fn node(&mut self, node: &Node, level: usize) -> Vec<Gate> {
        match node.kind() {
            NodeKind::Leaf { qubit, alpha, beta } => {
                let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
                vec![Gate::Prep {
                    qubit: *qubit,
                    alpha: alpha / norm,
                    beta: beta / norm,
                }]
            }
            NodeKind::Tensor(ch) => ch.iter().flat_map(|c| self.node(c, level)).collect(),
            NodeKind::Plus(ch) => {
                let terms: Vec<(C64, &Node)> = ch
                    .iter()
                    .map(|(c, n)| (c * node_norm(n), n))
                    .filter(|(d, _)| d.norm() > 0.0)
                    .collect();
                self.chain(&terms, node, level)
            }
        }
    }

    /// Prepares `sum d_i |child_i> / |d|`, splitting the terms in halves.
    fn chain(&mut self, terms: &[(C64, &Node)], vertex: &Node, level: usize) -> Vec<Gate> {
        if terms.len() == 1 {
            let (d, child) = terms[0];
            let mut gates = self.node(child, level);
            let phase = d / d.norm();
            if (phase - C64::new(1.0, 0.0)).norm() > 1e-15 {
                gates.push(Gate::Unitary {
                    qubits: vec![child.set().min().expect("nonempty vertex")],
                    matrix: CMatrix::diag(&[phase, phase]),
                });
            }
            return gates;
        }
        let norm = |ts: &[(C64, &Node)]| ts.iter().map(|(d, _)| d.norm_sqr()).sum::<f64>().sqrt();
        let (left, right) = terms.split_at(terms.len() / 2);
        let total = norm(terms);
        let alpha = C64::new(norm(left) / total, 0.0);
        let beta = C64::new(norm(right) / total, 0.0);
        let anc = self.ancilla(level);
        let u = self.chain(left, vertex, level + 1);
        let v = self.chain(right, vertex, level + 1);
        let mut used = BTreeSet::new();
        for g in u.iter().chain(&v) {
            g.wires(&mut used);
        }
        let mut register: Vec<usize> = vertex.set().iter().collect();
        register.extend(used.into_iter().filter(|&w| w > anc));
        let mut body = v;
        body.extend(invert_gates(&u));
        let mut gates = vec![
            Gate::Prep { qubit: anc, alpha, beta },
            Gate::ControlledSub {
                control: anc,
                polarity: true,
                body,
            },
            Gate::OrNot { target: anc, register },
        ];
        gates.extend(unitaryize(u));
        gates
    }
}

/// Circuit preparing the normalized tree state on data wires, with all
/// ancillas returned to `|0>`.
pub fn compile(tree: &StateTree) -> Result<Circuit> {
    match classify(tree, DEFAULT_MAX_QUBITS)? {
        TreeClass::General => return Err(Error::NotOrthogonal("a + vertex has non-orthogonal children".into())),
        TreeClass::Orthogonal | TreeClass::ManifestlyOrthogonal => {}
    }
    if node_norm(&tree.root) == 0.0 {
        return Err(Error::InvalidTree("tree represents the zero vector".into()));
    }
    let mut comp = Compiler {
        n_data: tree.n,
        max_level: 0,
    };
    let gates = comp.node(&tree.root, 0);
    Ok(Circuit::new(tree.n, comp.max_level, gates))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrepareReport {
    pub fidelity: f64,
    pub gate_count: usize,
    pub n_data: usize,
    pub n_ancilla: usize,
    pub tree_size: usize,
}

impl PrepareReport {
    /// `gates / (tree size * n)`.
    pub fn size_ratio(&self) -> f64 {
        self.gate_count as f64 / (self.tree_size * self.n_data.max(1)) as f64
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "key\tvalue\nfidelity\t{:.15}\ngates\t{}\ndata_qubits\t{}\nancillas\t{}\ntree_size\t{}\nsize_ratio\t{:.6}\n",
            self.fidelity,
            self.gate_count,
            self.n_data,
            self.n_ancilla,
            self.tree_size,
            self.size_ratio()
        )
    }
}

/// Compiles, simulates and compares with the tree state padded by `|0>`
/// ancillas.
pub fn verify_prepare(tree: &StateTree) -> Result<PrepareReport> {
    let c = compile(tree)?;
    let out = simulate(&c)?;
    let target = evaluate(tree, DEFAULT_MAX_QUBITS)?.tensor(&AmplitudeVector::basis(c.n_ancilla, 0));
    Ok(PrepareReport {
        fidelity: fidelity(&out, &target)?,
        gate_count: c.gate_count(),
        n_data: c.n_data,
        n_ancilla: c.n_ancilla,
        tree_size: tree.size(),
    })
}
