//! Text form of state trees.
//!
//! ```text
//! (leaf Q ALPHA BETA)
//! (+ (COEF NODE) ...)
//! (* NODE ...)
//! ```
//! Complex numbers are written `1.5`, `-2i` or `0.5-0.25i`; `;` starts a
//! comment.

use super::{Node, NodeKind, StateTree};
use crate::sexpr::{format_complex, parse_complex, parse_one, syntax_err, SExpr};
use crate::{Result, C64};

pub fn parse_tree(src: &str) -> Result<StateTree> {
    let e = parse_one(src)?;
    Ok(StateTree::from_root(to_node(&e)?))
}

fn to_node(e: &SExpr) -> Result<Node> {
    let SExpr::List(items, pos) = e else {
        return Err(syntax_err(e.pos(), "expected '(' to start a vertex"));
    };
    let head = match items.first() {
        Some(SExpr::Atom(h, _)) => h.as_str(),
        _ => return Err(syntax_err(*pos, "missing vertex keyword")),
    };
    match head {
        "leaf" => {
            if items.len() != 4 {
                return Err(syntax_err(*pos, "leaf takes a qubit and two amplitudes"));
            }
            let q = match &items[1] {
                SExpr::Atom(s, p) => s
                    .parse::<usize>()
                    .ok()
                    .filter(|q| (1..=64).contains(q))
                    .ok_or_else(|| syntax_err(*p, format!("bad qubit label '{s}'")))?,
                other => return Err(syntax_err(other.pos(), "expected qubit label")),
            };
            Ok(Node::leaf(q, complex(&items[2])?, complex(&items[3])?))
        }
        "+" => {
            let mut children = Vec::new();
            for it in &items[1..] {
                match it {
                    SExpr::List(pair, p) if pair.len() == 2 => {
                        children.push((complex(&pair[0])?, to_node(&pair[1])?));
                    }
                    _ => return Err(syntax_err(it.pos(), "expected (COEF NODE)")),
                }
            }
            Ok(Node::plus(children))
        }
        "*" => {
            let children = items[1..].iter().map(to_node).collect::<Result<Vec<_>>>()?;
            Ok(Node::tensor_raw(children))
        }
        other => Err(syntax_err(items[0].pos(), format!("unknown vertex '{other}'"))),
    }
}

fn complex(e: &SExpr) -> Result<C64> {
    match e {
        SExpr::Atom(s, p) => parse_complex(s, *p),
        SExpr::List(_, p) => Err(syntax_err(*p, "expected a number")),
    }
}

pub fn serialize_tree(tree: &StateTree) -> String {
    let mut out = String::new();
    write_node(&tree.root, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(node: &Node, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match node.kind() {
        NodeKind::Leaf { qubit, alpha, beta } => {
            out.push_str(&format!(
                "{pad}(leaf {qubit} {} {})",
                format_complex(*alpha),
                format_complex(*beta)
            ));
        }
        NodeKind::Plus(ch) => {
            out.push_str(&format!("{pad}(+"));
            for (c, child) in ch {
                out.push_str(&format!("\n{pad}  ({}\n", format_complex(*c)));
                write_node(child, indent + 4, out);
                out.push(')');
            }
            out.push(')');
        }
        NodeKind::Tensor(ch) => {
            out.push_str(&format!("{pad}(*"));
            for child in ch {
                out.push('\n');
                write_node(child, indent + 2, out);
            }
            out.push(')');
        }
    }
}
