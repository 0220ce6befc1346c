//! Textual model files.
//!
//! ```text
//! outer 2
//! inner 0
//! const b 0
//! pred A/1 0 1
//! pred R/2 0,1 1,1
//! func f/1 0:1 1:0
//! var x 1
//! ```
//!
//! Elements are `0..outer`. Predicate lines list the tuples in the
//! extension, function lines every `args:value` entry. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};

use super::{Assignment, Element, SemanticsError, Structure};
use crate::syntax::is_identifier;

pub fn print_model(m: &Structure, s: &Assignment) -> String {
    let join = |v: &[Element]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    let mut out = format!("outer {}\n", m.outer);
    let inner: Vec<String> = m.inner.iter().map(|d| format!(" {d}")).collect();
    out.push_str(&format!("inner{}\n", inner.concat()));
    for (c, d) in &m.consts {
        out.push_str(&format!("const {c} {d}\n"));
    }
    for (p, ext) in &m.preds {
        let arity = ext
            .iter()
            .next()
            .map(Vec::len)
            .or_else(|| m.pred_arity.get(p).copied())
            .unwrap_or(1);
        let tuples: Vec<String> = ext.iter().map(|t| format!(" {}", join(t))).collect();
        out.push_str(&format!("pred {p}/{arity}{}\n", tuples.concat()));
    }
    for (f, table) in &m.funcs {
        let arity = table.keys().next().map_or(0, Vec::len);
        let entries: Vec<String> = table
            .iter()
            .map(|(k, v)| format!(" {}:{v}", join(k)))
            .collect();
        out.push_str(&format!("func {f}/{arity}{}\n", entries.concat()));
    }
    for (x, d) in &s.0 {
        out.push_str(&format!("var {x} {d}\n"));
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> SemanticsError {
    SemanticsError::ModelFile {
        line,
        msg: msg.into(),
    }
}

pub fn parse_model(text: &str) -> Result<(Structure, Assignment), SemanticsError> {
    let mut m: Option<Structure> = None;
    let mut s = Assignment::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let key = words.next().unwrap();
        if key == "outer" {
            if m.is_some() {
                return Err(err(line, "duplicate `outer`"));
            }
            let n: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| err(line, "expected `outer N`"))?;
            if n == 0 {
                return Err(SemanticsError::EmptyDomain);
            }
            m = Some(Structure::new(n));
            continue;
        }
        let m = m.as_mut().ok_or_else(|| err(line, "`outer` must come first"))?;
        let elem = |w: &str| -> Result<Element, SemanticsError> {
            match w.parse::<Element>() {
                Ok(d) if d < m.outer => Ok(d),
                _ => Err(err(line, format!("`{w}` is not an element of 0..{}", m.outer))),
            }
        };
        let tuple = |w: &str, arity: usize| -> Result<Vec<Element>, SemanticsError> {
            let t = w.split(',').map(elem).collect::<Result<Vec<_>, _>>()?;
            if t.len() != arity {
                return Err(err(line, format!("`{w}` does not have {arity} components")));
            }
            Ok(t)
        };
        let symbol = |w: Option<&str>, seen: &mut BTreeSet<String>| -> Result<(String, usize), SemanticsError> {
            let w = w.ok_or_else(|| err(line, "missing symbol"))?;
            let (name, arity) = match w.split_once('/') {
                Some((n, a)) => (n, a.parse::<usize>().map_err(|_| err(line, "bad arity"))?),
                None => (w, 0),
            };
            if !is_identifier(name) {
                return Err(err(line, format!("`{name}` is not an identifier")));
            }
            if !seen.insert(name.to_string()) {
                return Err(err(line, format!("`{name}` defined twice")));
            }
            Ok((name.to_string(), arity))
        };
        match key {
            "inner" => {
                let inner = words.map(elem).collect::<Result<BTreeSet<_>, _>>()?;
                m.inner = inner;
            }
            "const" | "var" => {
                let (name, _) = symbol(words.next(), &mut seen)?;
                let d = elem(words.next().ok_or_else(|| err(line, "missing element"))?)?;
                if key == "const" {
                    m.consts.insert(name, d);
                } else {
                    s.0.insert(name, d);
                }
            }
            "pred" => {
                let (name, arity) = symbol(words.next(), &mut seen)?;
                if arity == 0 {
                    return Err(err(line, "predicates need `/arity` >= 1"));
                }
                let ext = words
                    .map(|w| tuple(w, arity))
                    .collect::<Result<BTreeSet<_>, _>>()?;
                m.pred_arity.insert(name.clone(), arity);
                m.preds.insert(name, ext);
            }
            "func" => {
                let (name, arity) = symbol(words.next(), &mut seen)?;
                if arity == 0 {
                    return Err(err(line, "functions need `/arity` >= 1"));
                }
                let mut table = BTreeMap::new();
                for w in words {
                    let (k, v) = w
                        .split_once(':')
                        .ok_or_else(|| err(line, format!("expected `args:value`, got `{w}`")))?;
                    table.insert(tuple(k, arity)?, elem(v)?);
                }
                if table.len() != m.outer.pow(arity as u32) {
                    return Err(err(line, format!("function `{name}` is not total")));
                }
                m.funcs.insert(name, table);
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    let m = m.ok_or_else(|| err(0, "missing `outer`"))?;
    Ok((m, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::enumerate_structures;
    use crate::syntax::Signature;

    #[test]
    fn round_trip_over_enumeration() {
        let sig = Signature::new()
            .with_predicate("R", 2)
            .unwrap()
            .with_predicate("P", 1)
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_function("f", 1)
            .unwrap();
        let s = Assignment::new().updated("x", 0);
        for m in enumerate_structures(&sig, 2).unwrap() {
            let text = print_model(&m, &s);
            let (m2, s2) = parse_model(&text).unwrap();
            assert_eq!(print_model(&m2, &s2), text);
            assert_eq!(m2.inner, m.inner);
            assert_eq!(m2.preds, m.preds);
            assert_eq!(m2.funcs, m.funcs);
            assert_eq!(s2, s);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_model("inner 0"), Err(SemanticsError::ModelFile { line: 1, .. })));
        assert!(matches!(
            parse_model("outer 2\ninner 2"),
            Err(SemanticsError::ModelFile { line: 2, .. })
        ));
        assert!(parse_model("outer 2\nfunc f/1 0:1").is_err());
        assert!(parse_model("outer 2\npred P/2 0").is_err());
        assert!(parse_model("outer 1\nconst c 0\nconst c 0").is_err());
        assert_eq!(parse_model("outer 0"), Err(SemanticsError::EmptyDomain));
    }
}
