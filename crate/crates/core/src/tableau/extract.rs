//! Countermodels from open saturated branches.

use std::collections::{BTreeMap, BTreeSet};

use super::branch::{Branch, Classes};
use super::TableauError;
use crate::semantics::{satisfies, Assignment, Element, Structure};
use crate::syntax::{print_formula, Formula, Signature, Term};

/// The term model of a branch: one element per class of branch terms.
///
/// Atoms on the branch are true, every other atom false; function values not
/// fixed by a branch term go to element 0. The model is checked against
/// every formula on the branch before it is returned.
pub fn extract_model(b: &Branch) -> Result<(Structure, Assignment), TableauError> {
    if let Some(why) = b.closure() {
        return Err(TableauError::ExtractionFailed(format!("branch is closed: {why}")));
    }
    let classes = Classes::of(b);
    let reps = classes.representatives(&b.terms);
    let elem: BTreeMap<&Term, Element> = reps.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let of = |t: &Term| elem[classes.rep(t)];

    let sig = Signature::of_formulas(&b.formulas).map_err(|e| TableauError::ExtractionFailed(e.to_string()))?;
    let mut m = Structure::new(reps.len());
    for (p, &k) in &sig.predicates {
        m.preds.insert(p.clone(), BTreeSet::new());
        m.pred_arity.insert(p.clone(), k);
    }
    for f in &b.formulas {
        match f {
            Formula::Pred(p, args) => {
                let tuple = args.iter().map(of).collect();
                m.preds.get_mut(p).expect("collected above").insert(tuple);
            }
            Formula::Exists(t) => {
                m.inner.insert(of(t));
            }
            _ => {}
        }
    }
    for t in &b.terms {
        if let Term::Const(c) = t {
            m.consts.insert(c.clone(), of(t));
        }
    }
    for (fname, &k) in &sig.functions {
        let mut table = BTreeMap::new();
        for t in &b.terms {
            if let Term::App(g, args) = t {
                if g == fname {
                    table.insert(args.iter().map(of).collect::<Vec<_>>(), of(t));
                }
            }
        }
        for args in all_tuples(reps.len(), k) {
            table.entry(args).or_insert(0);
        }
        m.funcs.insert(fname.clone(), table);
    }
    let s = Assignment::new();
    for f in &b.formulas {
        match satisfies(&m, &s, f) {
            Ok(true) => {}
            Ok(false) => {
                return Err(TableauError::ExtractionFailed(format!(
                    "extracted model falsifies {}",
                    print_formula(f)
                )))
            }
            Err(e) => return Err(TableauError::ExtractionFailed(e.to_string())),
        }
    }
    Ok((m, s))
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<Element>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..n).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect()
    })
}
