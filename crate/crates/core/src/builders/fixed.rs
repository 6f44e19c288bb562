use std::f64::consts::FRAC_1_SQRT_2;

use crate::state::{Node, StateTree};
use crate::C64;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Two-term sum of classical products with coefficients `±1/sqrt(2)`.
fn pair(qs: &[usize], a: &str, b: &str, sign: f64) -> Node {
    let bits = |s: &str| s.bytes().map(|c| c == b'1').collect::<Vec<_>>();
    Node::plus(vec![
        (r(FRAC_1_SQRT_2), Node::product(qs, &bits(a))),
        (r(sign * FRAC_1_SQRT_2), Node::product(qs, &bits(b))),
    ])
}

/// Five-qubit code state as a sum of four products, 40 leaves.
pub fn build_knill_tree() -> StateTree {
    let (x, y) = ([1, 2], [3, 4, 5]);
    let term = |c: f64, a: Node, b: Node| (r(c), Node::tensor_raw(vec![a, b]));
    StateTree::new(
        5,
        Node::plus(vec![
            term(0.5, pair(&x, "01", "10", 1.0), pair(&y, "010", "111", -1.0)),
            term(0.5, pair(&x, "01", "10", -1.0), pair(&y, "001", "100", -1.0)),
            term(-0.5, pair(&x, "00", "11", 1.0), pair(&y, "011", "110", 1.0)),
            term(0.5, pair(&x, "00", "11", -1.0), pair(&y, "000", "101", 1.0)),
        ]),
    )
}

/// Two-qubit tree with amplitudes (1/2, 1/2, 1/2, -1/2).
pub fn build_figure2_tree() -> StateTree {
    let h = r(FRAC_1_SQRT_2);
    let plus = Node::plus(vec![(h, Node::basis(2, false)), (h, Node::basis(2, true))]);
    let minus = Node::plus(vec![(h, Node::basis(2, false)), (-h, Node::basis(2, true))]);
    StateTree::new(
        2,
        Node::plus(vec![
            (h, Node::tensor_raw(vec![Node::basis(1, false), plus])),
            (h, Node::tensor_raw(vec![Node::basis(1, true), minus])),
        ]),
    )
}
