//! Line-oriented circuit format.
//!
//! ```text
//! qubits D A
//! prep Q RE IM RE IM
//! u K q1..qK m00re m00im ...
//! csub Q POL {
//!   ...
//! }
//! ornot T q1..qK
//! ```

use super::{Circuit, Gate};
use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

struct Line<'a> {
    no: usize,
    toks: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn at(&self, i: usize) -> Result<(usize, &'a str)> {
        self.toks
            .get(i)
            .copied()
            .ok_or_else(|| err(self.no, self.toks.last().map_or(1, |t| t.0 + t.1.len()), "missing field"))
    }

    fn usize(&self, i: usize) -> Result<usize> {
        let (c, t) = self.at(i)?;
        t.parse().map_err(|_| err(self.no, c, format!("expected an integer, found '{t}'")))
    }

    fn float(&self, i: usize) -> Result<f64> {
        let (c, t) = self.at(i)?;
        t.parse().map_err(|_| err(self.no, c, format!("expected a number, found '{t}'")))
    }

    fn complex(&self, i: usize) -> Result<C64> {
        Ok(C64::new(self.float(i)?, self.float(i + 1)?))
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.toks.len() > n {
            let (c, t) = self.toks[n];
            return Err(err(self.no, c, format!("unexpected '{t}'")));
        }
        self.at(n - 1).map(|_| ())
    }
}

fn tokenize(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (c, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        toks.push((s + 1, &body[s..c]));
                    }
                } else if start.is_none() {
                    start = Some(c);
                }
            }
            (!toks.is_empty()).then_some(Line { no: i + 1, toks })
        })
        .collect()
}

fn parse_block<'a>(lines: &[Line<'a>], pos: &mut usize, nested: bool) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    while *pos < lines.len() {
        let l = &lines[*pos];
        *pos += 1;
        let (col, word) = l.toks[0];
        match word {
            "}" => {
                if !nested {
                    return Err(err(l.no, col, "unmatched '}'"));
                }
                l.expect_len(1)?;
                return Ok(gates);
            }
            "prep" => {
                l.expect_len(6)?;
                gates.push(Gate::Prep {
                    qubit: l.usize(1)?,
                    alpha: l.complex(2)?,
                    beta: l.complex(4)?,
                });
            }
            "u" => {
                let k = l.usize(1)?;
                if k == 0 || k > super::MAX_UNITARY_QUBITS {
                    return Err(err(l.no, l.toks[1].0, format!("unitary on {k} wires")));
                }
                let d = 1usize << k;
                l.expect_len(2 + k + 2 * d * d)?;
                let qubits = (0..k).map(|i| l.usize(2 + i)).collect::<Result<Vec<_>>>()?;
                let data = (0..d * d).map(|i| l.complex(2 + k + 2 * i)).collect::<Result<Vec<_>>>()?;
                gates.push(Gate::Unitary {
                    qubits,
                    matrix: CMatrix::from_vec(d, d, data)?,
                });
            }
            "csub" => {
                l.expect_len(4)?;
                let control = l.usize(1)?;
                let polarity = match l.at(2)? {
                    (_, "1") => true,
                    (_, "0") => false,
                    (c, t) => return Err(err(l.no, c, format!("polarity must be 0 or 1, found '{t}'"))),
                };
                let (c, t) = l.at(3)?;
                if t != "{" {
                    return Err(err(l.no, c, "expected '{'"));
                }
                let body = parse_block(lines, pos, true)?;
                gates.push(Gate::ControlledSub { control, polarity, body });
            }
            "ornot" => {
                let target = l.usize(1)?;
                let register = (2..l.toks.len()).map(|i| l.usize(i)).collect::<Result<Vec<_>>>()?;
                if register.is_empty() {
                    return Err(err(l.no, col, "ornot needs a register"));
                }
                gates.push(Gate::OrNot { target, register });
            }
            "qubits" => return Err(err(l.no, col, "repeated header")),
            other => return Err(err(l.no, col, format!("unknown gate '{other}'"))),
        }
    }
    if nested {
        let last = lines.last().map_or(1, |l| l.no);
        return Err(err(last, 1, "unterminated block"));
    }
    Ok(gates)
}

/// Parses and validates a circuit.
pub fn parse_circuit(src: &str) -> Result<Circuit> {
    let lines = tokenize(src);
    let head = lines.first().ok_or_else(|| err(1, 1, "empty circuit"))?;
    if head.toks[0].1 != "qubits" {
        return Err(err(head.no, head.toks[0].0, "expected 'qubits D A'"));
    }
    head.expect_len(3)?;
    let (d, a) = (head.usize(1)?, head.usize(2)?);
    let mut pos = 1;
    let gates = parse_block(&lines, &mut pos, false)?;
    let c = Circuit::new(d, a, gates);
    c.validate()?;
    Ok(c)
}

fn push_c(s: &mut String, z: C64) {
    // adding 0.0 turns -0 into 0
    s.push_str(&format!(" {} {}", z.re + 0.0, z.im + 0.0));
}

fn write_block(gates: &[Gate], indent: usize, s: &mut String) {
    let pad = "  ".repeat(indent);
    for g in gates {
        s.push_str(&pad);
        match g {
            Gate::Prep { qubit, alpha, beta } => {
                s.push_str(&format!("prep {qubit}"));
                push_c(s, *alpha);
                push_c(s, *beta);
            }
            Gate::Unitary { qubits, matrix } => {
                s.push_str(&format!("u {}", qubits.len()));
                for q in qubits {
                    s.push_str(&format!(" {q}"));
                }
                for &z in matrix.data() {
                    push_c(s, z);
                }
            }
            Gate::ControlledSub { control, polarity, body } => {
                s.push_str(&format!("csub {control} {} {{\n", *polarity as u8));
                write_block(body, indent + 1, s);
                s.push_str(&pad);
                s.push('}');
            }
            Gate::OrNot { target, register } => {
                s.push_str(&format!("ornot {target}"));
                for q in register {
                    s.push_str(&format!(" {q}"));
                }
            }
        }
        s.push('\n');
    }
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut s = format!("qubits {} {}\n", c.n_data, c.n_ancilla);
    write_block(&c.gates, 0, &mut s);
    s
}
