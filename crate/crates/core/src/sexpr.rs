//! Minimal s-expression reader shared by the tree and formula formats.

use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub(crate) enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }
}

pub(crate) fn syntax_err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

enum Tok {
    Open(Pos),
    Close(Pos),
    Atom(String, Pos),
}

fn tokenize(src: &str) -> Vec<Tok> {
    let mut toks = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let line = match line.find(';') {
            Some(i) => &line[..i],
            None => line,
        };
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, ch) = chars[i];
            let pos = Pos {
                line: li + 1,
                col: i + 1,
            };
            match ch {
                '(' => {
                    toks.push(Tok::Open(pos));
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::Close(pos));
                    i += 1;
                }
                c if c.is_whitespace() => i += 1,
                _ => {
                    let start = i;
                    while i < chars.len()
                        && !chars[i].1.is_whitespace()
                        && chars[i].1 != '('
                        && chars[i].1 != ')'
                    {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                    toks.push(Tok::Atom(s, pos));
                }
            }
        }
    }
    toks
}

/// Parses exactly one expression; trailing input is an error.
pub(crate) fn parse_one(src: &str) -> Result<SExpr> {
    let toks = tokenize(src);
    let mut i = 0;
    let e = parse_at(&toks, &mut i)?;
    if let Some(t) = toks.get(i) {
        let p = match t {
            Tok::Open(p) | Tok::Close(p) | Tok::Atom(_, p) => *p,
        };
        return Err(syntax_err(p, "unexpected trailing input"));
    }
    Ok(e)
}

fn parse_at(toks: &[Tok], i: &mut usize) -> Result<SExpr> {
    match toks.get(*i) {
        None => Err(syntax_err(Pos { line: 1, col: 1 }, "empty input")),
        Some(Tok::Close(p)) => Err(syntax_err(*p, "unexpected ')'")),
        Some(Tok::Atom(s, p)) => {
            *i += 1;
            Ok(SExpr::Atom(s.clone(), *p))
        }
        Some(Tok::Open(p)) => {
            let open = *p;
            *i += 1;
            let mut items = Vec::new();
            loop {
                match toks.get(*i) {
                    None => return Err(syntax_err(open, "unclosed '('")),
                    Some(Tok::Close(_)) => {
                        *i += 1;
                        return Ok(SExpr::List(items, open));
                    }
                    _ => items.push(parse_at(toks, i)?),
                }
            }
        }
    }
}

pub(crate) fn parse_float(s: &str, pos: Pos) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| syntax_err(pos, format!("bad number '{s}'")))
}

/// Complex literal: `FLOAT`, `FLOATi`, or `FLOAT(+|-)FLOATi`.
pub(crate) fn parse_complex(s: &str, pos: Pos) -> Result<C64> {
    let bad = || syntax_err(pos, format!("bad complex number '{s}'"));
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(parse_float(s, pos)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => parse_float(body, pos).map_err(|_| bad())?,
            };
            Ok(C64::new(0.0, im))
        }
        Some(k) => {
            let re = parse_float(&body[..k], pos).map_err(|_| bad())?;
            let im_s = &body[k..];
            let im = match im_s {
                "+" => 1.0,
                "-" => -1.0,
                _ => parse_float(im_s, pos).map_err(|_| bad())?,
            };
            Ok(C64::new(re, im))
        }
    }
}

/// Shortest round-trip text for a complex value.
pub(crate) fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
