//! Dual-domain structures: terms denote in the outer domain, `∀` ranges over
//! the inner domain, `∃!` holds of exactly the inner elements and `Ix[A, B]`
//! asks for a unique `A` in the outer domain.

mod enumerate;
mod model_file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::Sequent;
use crate::syntax::{Formula, Term};

pub use enumerate::{
    count_structures, enumerate_structures, find_countermodel, find_countermodel_parallel,
    StructureSpace,
};
pub use model_file::{parse_model, print_model};

/// Elements are `0..outer`.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted")]
    Uninterpreted(String),
    #[error("domain must have at least one element")]
    EmptyDomain,
    #[error("too many structures to enumerate")]
    SearchSpaceTooLarge,
    #[error("model file line {line}: {msg}")]
    ModelFile { line: usize, msg: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Structure {
    /// Size of the outer domain.
    pub outer: usize,
    pub inner: BTreeSet<Element>,
    pub preds: BTreeMap<String, BTreeSet<Vec<Element>>>,
    /// Arity of each predicate (extensions may be empty).
    pub pred_arity: BTreeMap<String, usize>,
    pub consts: BTreeMap<String, Element>,
    /// Total tables `outer^n → outer`.
    pub funcs: BTreeMap<String, BTreeMap<Vec<Element>, Element>>,
}

impl Structure {
    pub fn new(outer: usize) -> Self {
        Structure {
            outer,
            ..Default::default()
        }
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.outer
    }

    /// Checks the domain invariants.
    pub fn well_formed(&self) -> bool {
        self.outer >= 1
            && self.inner.iter().all(|&d| d < self.outer)
            && self.consts.values().all(|&d| d < self.outer)
            && self
                .preds
                .values()
                .all(|ext| ext.iter().flatten().all(|&d| d < self.outer))
            && self.funcs.values().all(|table| {
                let arity = table.keys().next().map_or(0, Vec::len);
                table.len() == self.outer.pow(arity as u32)
                    && table
                        .iter()
                        .all(|(k, &v)| v < self.outer && k.len() == arity && k.iter().all(|&d| d < self.outer))
            })
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_model(self, &Assignment::new()))
    }
}

/// Values of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(pub BTreeMap<String, Element>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &str) -> Option<Element> {
        self.0.get(x).copied()
    }

    /// `s(x|d)`
    pub fn updated(&self, x: &str, d: Element) -> Self {
        let mut s = self.clone();
        s.0.insert(x.to_string(), d);
        s
    }
}

pub fn eval_term(m: &Structure, s: &Assignment, t: &Term) -> Result<Element, SemanticsError> {
    match t {
        Term::Var(x) => s
            .get(x)
            .ok_or_else(|| SemanticsError::UnboundVariable(x.clone())),
        Term::Const(c) => m
            .consts
            .get(c)
            .copied()
            .ok_or_else(|| SemanticsError::Uninterpreted(c.clone())),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, s, a))
                .collect::<Result<Vec<_>, _>>()?;
            m.funcs
                .get(f)
                .and_then(|table| table.get(&vals))
                .copied()
                .ok_or_else(|| SemanticsError::Uninterpreted(f.clone()))
        }
    }
}

pub fn satisfies(m: &Structure, s: &Assignment, a: &Formula) -> Result<bool, SemanticsError> {
    Ok(match a {
        Formula::Eq(l, r) => eval_term(m, s, l)? == eval_term(m, s, r)?,
        Formula::Exists(t) => m.inner.contains(&eval_term(m, s, t)?),
        Formula::Pred(p, args) => {
            let vals = args
                .iter()
                .map(|t| eval_term(m, s, t))
                .collect::<Result<Vec<_>, _>>()?;
            m.preds
                .get(p)
                .ok_or_else(|| SemanticsError::Uninterpreted(p.clone()))?
                .contains(&vals)
        }
        Formula::Not(b) => !satisfies(m, s, b)?,
        Formula::Imp(b, c) => !satisfies(m, s, b)? || satisfies(m, s, c)?,
        Formula::Forall(x, b) => {
            for &d in &m.inner {
                if !satisfies(m, &s.updated(x, d), b)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Iq(x, b, c) => {
            let mut witness = None;
            for d in m.elements() {
                if satisfies(m, &s.updated(x, d), b)? {
                    if witness.is_some() {
                        return Ok(false);
                    }
                    witness = Some(d);
                }
            }
            match witness {
                Some(d) => satisfies(m, &s.updated(x, d), c)?,
                None => false,
            }
        }
    })
}

/// If every antecedent formula holds then some succedent formula holds.
pub fn satisfies_sequent(m: &Structure, s: &Assignment, q: &Sequent) -> Result<bool, SemanticsError> {
    for a in &q.ante {
        if !satisfies(m, s, a)? {
            return Ok(true);
        }
    }
    for c in &q.succ {
        if satisfies(m, s, c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A sequent that is not derivable, witnessed by a small countermodel.
#[derive(Clone, Copy, Debug)]
pub struct NonDerivable {
    pub name: &'static str,
    pub sequent: &'static str,
    /// Largest outer size the smallest witness may need.
    pub witness_size: usize,
}

pub fn non_derivable_corpus() -> Vec<NonDerivable> {
    vec![
        NonDerivable {
            name: "other-half-LL",
            sequent: "forall x. (A(x) <-> x = b) |- I x [A(x), x = b]",
            witness_size: 2,
        },
        NonDerivable {
            name: "other-half-LL-existent",
            sequent: "forall x. (A(x) <-> x = b), E! b |- I x [A(x), x = b]",
            witness_size: 2,
        },
        NonDerivable {
            name: "FL-for-descriptions",
            sequent: "|- I x [F(x), I y [F(y), x = y]]",
            witness_size: 2,
        },
    ]
}
