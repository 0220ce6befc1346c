use std::collections::BTreeSet;

use thiserror::Error;

use super::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting `{term}` for `{var}` would capture a variable")]
pub struct CaptureError {
    pub var: String,
    pub term: String,
}

fn term_replace_var(s: &Term, x: &str, t: &Term) -> Term {
    match s {
        Term::Var(y) if y == x => t.clone(),
        Term::Var(_) | Term::Const(_) => s.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| term_replace_var(a, x, t)).collect(),
        ),
    }
}

fn term_replace_const(s: &Term, c: &str, t: &Term) -> Term {
    match s {
        Term::Const(d) if d == c => t.clone(),
        Term::Var(_) | Term::Const(_) => s.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| term_replace_const(a, c, t)).collect(),
        ),
    }
}

/// True iff no free occurrence of `x` in `a` sits under a binder for a
/// variable of `t`.
pub fn is_free_for(t: &Term, x: &str, a: &Formula) -> bool {
    let tv = t.vars();
    if tv.is_empty() {
        return true;
    }
    fn walk(a: &Formula, x: &str, tv: &BTreeSet<String>, under: bool) -> bool {
        match a {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => {
                !under || !a.free_vars().contains(x)
            }
            Formula::Not(b) => walk(b, x, tv, under),
            Formula::Imp(b, c) => walk(b, x, tv, under) && walk(c, x, tv, under),
            Formula::Forall(y, _) | Formula::Iq(y, _, _) if y == x => true,
            Formula::Forall(y, b) => walk(b, x, tv, under || tv.contains(y)),
            Formula::Iq(y, b, c) => {
                let under = under || tv.contains(y);
                walk(b, x, tv, under) && walk(c, x, tv, under)
            }
        }
    }
    walk(a, x, &tv, false)
}

fn replace_free(a: &Formula, x: &str, t: &Term) -> Formula {
    match a {
        Formula::Pred(p, args) => Formula::Pred(
            p.clone(),
            args.iter().map(|s| term_replace_var(s, x, t)).collect(),
        ),
        Formula::Eq(l, r) => Formula::Eq(term_replace_var(l, x, t), term_replace_var(r, x, t)),
        Formula::Exists(s) => Formula::Exists(term_replace_var(s, x, t)),
        Formula::Not(b) => Formula::not(replace_free(b, x, t)),
        Formula::Imp(b, c) => Formula::imp(replace_free(b, x, t), replace_free(c, x, t)),
        Formula::Forall(y, _) | Formula::Iq(y, _, _) if y == x => a.clone(),
        Formula::Forall(y, b) => Formula::forall(y.clone(), replace_free(b, x, t)),
        Formula::Iq(y, b, c) => {
            Formula::iq(y.clone(), replace_free(b, x, t), replace_free(c, x, t))
        }
    }
}

/// `A_t^x`: replaces the free occurrences of `x` by `t`.
pub fn substitute(a: &Formula, x: &str, t: &Term) -> Result<Formula, CaptureError> {
    if !is_free_for(t, x, a) {
        return Err(CaptureError {
            var: x.to_string(),
            term: t.to_string(),
        });
    }
    Ok(replace_free(a, x, t))
}

/// Replaces every occurrence of the constant (parameter) `c` by `t`.
pub fn substitute_const(a: &Formula, c: &str, t: &Term) -> Result<Formula, CaptureError> {
    fn go(a: &Formula, c: &str, t: &Term, tv: &BTreeSet<String>) -> Option<Formula> {
        Some(match a {
            Formula::Pred(p, args) => Formula::Pred(
                p.clone(),
                args.iter().map(|s| term_replace_const(s, c, t)).collect(),
            ),
            Formula::Eq(l, r) => {
                Formula::Eq(term_replace_const(l, c, t), term_replace_const(r, c, t))
            }
            Formula::Exists(s) => Formula::Exists(term_replace_const(s, c, t)),
            Formula::Not(b) => Formula::not(go(b, c, t, tv)?),
            Formula::Imp(b, d) => Formula::imp(go(b, c, t, tv)?, go(d, c, t, tv)?),
            Formula::Forall(y, b) => {
                if tv.contains(y) && b.occurs(c) {
                    return None;
                }
                Formula::forall(y.clone(), go(b, c, t, tv)?)
            }
            Formula::Iq(y, b, d) => {
                if tv.contains(y) && (b.occurs(c) || d.occurs(c)) {
                    return None;
                }
                Formula::iq(y.clone(), go(b, c, t, tv)?, go(d, c, t, tv)?)
            }
        })
    }
    go(a, c, t, &t.vars()).ok_or_else(|| CaptureError {
        var: c.to_string(),
        term: t.to_string(),
    })
}

/// `base` with the smallest numeric suffix not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded suffixes")
}

/// Renames bound variables of `a` so that `t` becomes free for `x`.
/// Returns `a` unchanged when no renaming is needed.
pub fn alphabetic_variant(a: &Formula, x: &str, t: &Term) -> Formula {
    if is_free_for(t, x, a) {
        return a.clone();
    }
    let tv = t.vars();
    let mut avoid = a.names();
    t.collect_names(&mut avoid);
    avoid.insert(x.to_string());

    fn go(a: &Formula, x: &str, tv: &BTreeSet<String>, avoid: &mut BTreeSet<String>) -> Formula {
        match a {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => a.clone(),
            Formula::Not(b) => Formula::not(go(b, x, tv, avoid)),
            Formula::Imp(b, c) => Formula::imp(go(b, x, tv, avoid), go(c, x, tv, avoid)),
            Formula::Forall(y, _) | Formula::Iq(y, _, _) if y == x => a.clone(),
            Formula::Forall(y, b) => {
                // inner binders first
                let b = go(b, x, tv, avoid);
                if tv.contains(y) && b.free_vars().contains(x) {
                    let z = fresh_name(y, avoid);
                    avoid.insert(z.clone());
                    let b = replace_free(&b, y, &Term::Var(z.clone()));
                    Formula::forall(z, b)
                } else {
                    Formula::forall(y.clone(), b)
                }
            }
            Formula::Iq(y, b, c) => {
                let b = go(b, x, tv, avoid);
                let c = go(c, x, tv, avoid);
                let x_free = b.free_vars().contains(x) || c.free_vars().contains(x);
                if tv.contains(y) && x_free {
                    let z = fresh_name(y, avoid);
                    avoid.insert(z.clone());
                    let zv = Term::Var(z.clone());
                    Formula::iq(z, replace_free(&b, y, &zv), replace_free(&c, y, &zv))
                } else {
                    Formula::iq(y.clone(), b, c)
                }
            }
        }
    }
    go(a, x, &tv, &mut avoid)
}

/// Equality up to renaming of bound variables.
pub fn alpha_equivalent(a: &Formula, b: &Formula) -> bool {
    nameless(a, &mut Vec::new()) == nameless(b, &mut Vec::new())
}

// bound variables become `#k`, k the distance to the binder
fn nameless(a: &Formula, env: &mut Vec<String>) -> Formula {
    fn term(t: &Term, env: &[String]) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().position(|y| y == x) {
                Some(k) => Term::Var(format!("#{k}")),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|s| term(s, env)).collect()),
        }
    }
    match a {
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| term(t, env)).collect()),
        Formula::Eq(l, r) => Formula::Eq(term(l, env), term(r, env)),
        Formula::Exists(t) => Formula::Exists(term(t, env)),
        Formula::Not(b) => Formula::not(nameless(b, env)),
        Formula::Imp(b, c) => Formula::imp(nameless(b, env), nameless(c, env)),
        Formula::Forall(x, b) => {
            env.push(x.clone());
            let b = nameless(b, env);
            env.pop();
            Formula::forall("#", b)
        }
        Formula::Iq(x, b, c) => {
            env.push(x.clone());
            let b = nameless(b, env);
            let c = nameless(c, env);
            env.pop();
            Formula::iq("#", b, c)
        }
    }
}
