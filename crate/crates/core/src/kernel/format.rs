//! Textual proof files.
//!
//! ```text
//! (RI ((x "x") (A "x = c") (B "x = c") (t "c") (a "a")) "|- I x [x = c, x = c]"
//!   (EqE ((t "c")) "|- c = c"
//!     (Ax ((A "c = c")) "c = c |- c = c"))
//!   ...)
//! ```
//!
//! Every node is `(Rule (meta...) "sequent" premise...)`. Meta values are
//! quoted: names for `x` and `a`, terms for `t`, `t1`, `t2`, formulas for
//! `A`, `B`, `C` and `cutFormula`. Formula values are read with the node's
//! `x` as a variable. `;` starts a comment.

use thiserror::Error;

use super::{MetaKey, MetaVal, ProofTree, Rule, RuleApp, Sequent};
use crate::syntax::{
    is_identifier, parse_formula_in, parse_sequent_parts, parse_term_in, print_formula, print_term,
    Signature,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("proof file syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("unknown meta key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize),
    Str(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::Str(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn syntax(offset: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        offset,
        msg: msg.into(),
    }
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, FormatError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 0)];
    while i < bytes.len() {
        let (off, c) = bytes[i];
        match c {
            ';' => {
                while i < bytes.len() && bytes[i].1 != '\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => i += 1,
            '(' => {
                stack.push((Vec::new(), off));
                i += 1;
            }
            ')' => {
                if stack.len() == 1 {
                    return Err(syntax(off, "unbalanced `)`"));
                }
                let (items, start) = stack.pop().unwrap();
                stack.last_mut().unwrap().0.push(Sexp::List(items, start));
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    let Some(&(_, d)) = bytes.get(i) else {
                        return Err(syntax(off, "unterminated string"));
                    };
                    i += 1;
                    match d {
                        '"' => break,
                        '\\' => {
                            let Some(&(_, e)) = bytes.get(i) else {
                                return Err(syntax(off, "unterminated string"));
                            };
                            s.push(e);
                            i += 1;
                        }
                        _ => s.push(d),
                    }
                }
                stack.last_mut().unwrap().0.push(Sexp::Str(s, off));
            }
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].1.is_whitespace()
                    && !matches!(bytes[i].1, '(' | ')' | '"' | ';')
                {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().map(|(_, c)| c).collect();
                stack.last_mut().unwrap().0.push(Sexp::Atom(word, off));
            }
        }
    }
    if stack.len() != 1 {
        return Err(syntax(stack.last().unwrap().1, "unclosed `(`"));
    }
    Ok(stack.pop().unwrap().0)
}

/// Reads a proof file; symbols are declared in `sig` as they are met.
pub fn parse_proof(text: &str, sig: &mut Signature) -> Result<ProofTree, FormatError> {
    let items = read_sexps(text)?;
    match items.as_slice() {
        [one] => node(one, sig),
        [] => Err(syntax(0, "empty proof file")),
        [_, second, ..] => Err(syntax(second.offset(), "more than one proof in file")),
    }
}

fn node(s: &Sexp, sig: &mut Signature) -> Result<ProofTree, FormatError> {
    let Sexp::List(items, off) = s else {
        return Err(syntax(s.offset(), "expected `(rule ...)`"));
    };
    let [Sexp::Atom(rule, _), Sexp::List(meta, _), Sexp::Str(seq, soff), rest @ ..] =
        items.as_slice()
    else {
        return Err(syntax(*off, "expected `(rule (meta...) \"sequent\" premises...)`"));
    };
    let rule = Rule::from_name(rule).ok_or_else(|| FormatError::UnknownRule(rule.clone()))?;

    let mut raw: Vec<(MetaKey, String)> = Vec::new();
    for entry in meta {
        let Sexp::List(kv, koff) = entry else {
            return Err(syntax(entry.offset(), "expected `(key \"value\")`"));
        };
        let [Sexp::Atom(k, _), Sexp::Str(v, _)] = kv.as_slice() else {
            return Err(syntax(*koff, "expected `(key \"value\")`"));
        };
        let key = MetaKey::from_name(k).ok_or_else(|| FormatError::UnknownKey(k.clone()))?;
        raw.push((key, v.clone()));
    }
    let bound: Vec<String> = raw
        .iter()
        .filter(|(k, _)| *k == MetaKey::X)
        .map(|(_, v)| v.clone())
        .collect();

    let mut app = RuleApp::new(rule);
    for (key, v) in raw {
        let bad = |msg: String| FormatError::BadValue {
            key: key.name().to_string(),
            msg,
        };
        let val = match key {
            MetaKey::X | MetaKey::Param => {
                if !is_identifier(&v) {
                    return Err(bad(format!("`{v}` is not an identifier")));
                }
                if key == MetaKey::Param {
                    sig.add_constant(&v).map_err(|e| bad(e.to_string()))?;
                }
                MetaVal::Name(v)
            }
            MetaKey::T | MetaKey::T1 | MetaKey::T2 => {
                MetaVal::Term(parse_term_in(&v, sig, &[]).map_err(|e| bad(e.to_string()))?)
            }
            _ => MetaVal::Formula(
                parse_formula_in(&v, sig, &bound).map_err(|e| bad(e.to_string()))?,
            ),
        };
        app.meta.insert(key, val);
    }

    let (ante, succ) = parse_sequent_parts(seq, sig).map_err(|e| {
        syntax(*soff, format!("in sequent: {e}"))
    })?;
    let premises = rest
        .iter()
        .map(|p| node(p, sig))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree {
        conclusion: Sequent::new(ante, succ),
        app,
        premises,
    })
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Pretty-prints a proof, one node per line, premises indented.
pub fn print_proof(p: &ProofTree) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(p: &ProofTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let meta: Vec<String> = p
        .app
        .meta
        .iter()
        .map(|(k, v)| {
            let v = match v {
                MetaVal::Name(n) => n.clone(),
                MetaVal::Term(t) => print_term(t),
                MetaVal::Formula(a) => print_formula(a),
            };
            format!("({} {})", k.name(), quote(&v))
        })
        .collect();
    out.push_str(&format!(
        "{pad}({} ({}) {}",
        p.app.rule,
        meta.join(" "),
        quote(&p.conclusion.to_string())
    ));
    for q in &p.premises {
        out.push('\n');
        write_node(q, depth + 1, out);
    }
    out.push(')');
}
