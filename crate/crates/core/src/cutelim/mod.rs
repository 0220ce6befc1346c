//! Cut elimination by the Right and Left Reduction lemmas, with a
//! substitution lemma for proofs and eigen-parameter regularization.
//!
//! The main loop repeatedly picks a topmost cut of maximal degree and
//! replaces it via [`left_reduce`]. One configuration is outside the reach of
//! the lemmas: a degree-0 cut whose left premise introduces the atom by
//! `LI2` while the right premise uses it as principal formula of `=I` or
//! `L∀`. It is reported as [`CutElimError::StuckAtomicCut`].

pub mod fixtures;
mod reduce;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{
    check_proof, expand_macros, MetaKey, MetaVal, ProofError, ProofTree, Rule, RuleError, Sequent,
};
use crate::syntax::{fresh_name, print_formula, substitute_const, Formula, Term};

pub use reduce::{left_reduce, right_reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutElimError {
    #[error("input proof does not check: {0}")]
    Invalid(ProofError),
    #[error("replacing `{param}` would capture eigen-parameter `{eigen}`; regularize first")]
    EigenClash { param: String, eigen: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(
        "atomic cut on `{formula}` introduced by {left:?} and used by {right:?} is not reducible"
    )]
    StuckAtomicCut {
        formula: String,
        left: Rule,
        right: Rule,
    },
    #[error("rule application failed during reduction: {0}")]
    Rule(#[from] RuleError),
}

/// One reduction step, for `--trace`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub case: &'static str,
    pub cut_formula: String,
    pub degree: usize,
}

/// Number of `¬`, `→`, `∀` and `I` in the core formula.
pub fn degree(a: &Formula) -> usize {
    match a {
        Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => 0,
        Formula::Not(b) | Formula::Forall(_, b) => 1 + degree(b),
        Formula::Imp(b, c) | Formula::Iq(_, b, c) => 1 + degree(b) + degree(c),
    }
}

fn cut_formula(p: &ProofTree) -> Option<&Formula> {
    match (p.app.rule, p.app.meta.get(&MetaKey::CutFormula)) {
        (Rule::Cut, Some(MetaVal::Formula(a))) => Some(a),
        _ => None,
    }
}

/// Highest cut degree, `None` for cut-free proofs.
fn max_cut(p: &ProofTree) -> Option<usize> {
    p.nodes().into_iter().filter_map(cut_formula).map(degree).max()
}

/// Highest degree of a cut formula; 0 for cut-free proofs.
pub fn proof_degree(p: &ProofTree) -> usize {
    max_cut(p).unwrap_or(0)
}

/// All cuts have degree below `d`.
fn cuts_below(p: &ProofTree, d: usize) -> bool {
    max_cut(p).is_none_or(|m| m < d)
}

fn subst_formula(a: &Formula, name: &str, t: &Term) -> Result<Formula, CutElimError> {
    substitute_const(a, name, t).map_err(|_| CutElimError::EigenClash {
        param: name.to_string(),
        eigen: t.to_string(),
    })
}

/// Replaces the parameter `a` by `t` throughout `p`.
///
/// Subproofs where `a` is the eigen-parameter are left alone, since `a` does
/// not occur in their conclusions. Height is preserved.
pub fn substitute_in_proof(p: &ProofTree, a: &str, t: &Term) -> Result<ProofTree, CutElimError> {
    let mut tnames = BTreeSet::new();
    t.collect_names(&mut tnames);
    subst_rec(p, a, t, &tnames)
}

fn subst_rec(
    p: &ProofTree,
    a: &str,
    t: &Term,
    tnames: &BTreeSet<String>,
) -> Result<ProofTree, CutElimError> {
    if let Some(e) = p.app.eigen() {
        if e == a {
            return Ok(p.clone());
        }
        if tnames.contains(e) && p.conclusion.occurs(a) {
            return Err(CutElimError::EigenClash {
                param: a.to_string(),
                eigen: e.to_string(),
            });
        }
    }
    let side = |v: &[Formula]| -> Result<Vec<Formula>, CutElimError> {
        v.iter().map(|f| subst_formula(f, a, t)).collect()
    };
    let mut app = p.app.clone();
    for v in app.meta.values_mut() {
        match v {
            MetaVal::Name(_) => {}
            MetaVal::Term(s) => {
                let f = subst_formula(&Formula::Exists(s.clone()), a, t)?;
                if let Formula::Exists(s2) = f {
                    *s = s2;
                }
            }
            MetaVal::Formula(f) => *f = subst_formula(f, a, t)?,
        }
    }
    Ok(ProofTree {
        conclusion: Sequent::new(side(&p.conclusion.ante)?, side(&p.conclusion.succ)?),
        app,
        premises: p
            .premises
            .iter()
            .map(|q| subst_rec(q, a, t, tnames))
            .collect::<Result<_, _>>()?,
    })
}

/// Gives every `R∀`, `RI` and `LI1` application its own parameter that
/// occurs nowhere outside the subproof it closes.
pub fn regularize(p: &ProofTree) -> ProofTree {
    let mut avoid = p.names();
    regularize_with(p, &mut avoid)
}

pub(crate) fn regularize_with(p: &ProofTree, avoid: &mut BTreeSet<String>) -> ProofTree {
    let mut app = p.app.clone();
    let mut premises = p.premises.clone();
    if let Some(e) = p.app.eigen() {
        let e = e.to_string();
        let fresh = fresh_name(&e, avoid);
        avoid.insert(fresh.clone());
        let term = Term::Const(fresh.clone());
        premises = premises
            .iter()
            .map(|q| substitute_in_proof(q, &e, &term).expect("fresh names never clash"))
            .collect();
        app.meta.insert(MetaKey::Param, MetaVal::Name(fresh));
    }
    ProofTree {
        conclusion: p.conclusion.clone(),
        app,
        premises: premises.iter().map(|q| regularize_with(q, avoid)).collect(),
    }
}

fn node_at<'a>(p: &'a ProofTree, path: &[usize]) -> &'a ProofTree {
    path.iter().fold(p, |n, &i| &n.premises[i])
}

fn replace_at(p: &mut ProofTree, path: &[usize], new: ProofTree) {
    let slot = path.iter().fold(p, |n, &i| &mut n.premises[i]);
    *slot = new;
}

/// Path to a cut of maximal degree with no cut of that degree above it.
fn topmost_max_cut(p: &ProofTree) -> Option<(Vec<usize>, usize)> {
    let d = max_cut(p)?;
    fn find(p: &ProofTree, d: usize, path: &mut Vec<usize>) -> bool {
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            if find(q, d, path) {
                return true;
            }
            path.pop();
        }
        cut_formula(p).is_some_and(|a| degree(a) == d)
    }
    let mut path = Vec::new();
    find(p, d, &mut path).then_some((path, d))
}

fn count_at(p: &ProofTree, d: usize) -> usize {
    p.nodes()
        .into_iter()
        .filter_map(cut_formula)
        .filter(|a| degree(a) == d)
        .count()
}

/// A cut-free proof of the same endsequent. Macros are expanded first.
pub fn eliminate_cuts(p: &ProofTree) -> Result<ProofTree, CutElimError> {
    eliminate_cuts_traced(p).map(|(q, _)| q)
}

/// Like [`eliminate_cuts`], also returning every reduction step taken.
pub fn eliminate_cuts_traced(p: &ProofTree) -> Result<(ProofTree, Vec<TraceStep>), CutElimError> {
    check_proof(p).map_err(CutElimError::Invalid)?;
    if p.is_cut_free() {
        return Ok((p.clone(), Vec::new()));
    }
    let mut p = expand_macros(p);
    let mut trace = Vec::new();
    while let Some((path, d)) = topmost_max_cut(&p) {
        let before = (d, count_at(&p, d));
        p = regularize(&p);
        let node = node_at(&p, &path);
        let a = cut_formula(node).expect("path leads to a cut").clone();
        trace.push(TraceStep {
            case: "cut",
            cut_formula: print_formula(&a),
            degree: d,
        });
        let mut r = reduce::Reducer::new(p.names());
        let mut out = r.lr(&node.premises[0], &node.premises[1], &a, 1)?;
        trace.append(&mut r.trace);
        debug_assert!(cuts_below(&out, d), "reduction left a cut of degree >= {d}");
        debug_assert_eq!(out.conclusion, node.conclusion);
        out.conclusion = node.conclusion.clone();
        replace_at(&mut p, &path, out);
        let after = max_cut(&p).map(|m| (m, count_at(&p, m)));
        debug_assert!(after.is_none_or(|m| m < before), "measure did not decrease");
    }
    debug_assert!(check_proof(&p).is_ok());
    Ok((p, trace))
}

#[cfg(test)]
mod tests;
