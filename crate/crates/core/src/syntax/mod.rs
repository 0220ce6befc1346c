//! Terms, formulas and signatures for classical positive free logic extended
//! with the binary description quantifier `I`.
//!
//! The core AST only knows `¬`, `→`, `∀`, `I`, `=` and `∃!`. Conjunction,
//! disjunction, `∃` and `↔` are expanded while parsing.

mod parse;
mod print;
mod subst;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use parse::{
    parse_formula, parse_formula_in, parse_sequent_parts, parse_term, parse_term_in, Parser,
};
pub use print::{print_formula, print_term};
pub use subst::{
    alpha_equivalent, alphabetic_variant, fresh_name, is_free_for, substitute, substitute_const,
    CaptureError,
};

/// A term: a bound variable, a constant (parameters are constants too) or a
/// function application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn cst(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(f.into(), args)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Every identifier in the term: variables, constants and function names.
    pub fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) | Term::Const(x) => {
                out.insert(x.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_names(out));
            }
        }
    }

    pub fn occurs(&self, name: &str) -> bool {
        match self {
            Term::Var(x) | Term::Const(x) => x == name,
            Term::App(f, args) => f == name || args.iter().any(|a| a.occurs(name)),
        }
    }

    /// All subterms, the term itself included.
    pub fn subterms(&self, out: &mut BTreeSet<Term>) {
        out.insert(self.clone());
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms(out));
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// Core formulas. `Iq(x, a, b)` is `Ix[a, b]`, "the a is b".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Exists(Term),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Iq(String, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    pub fn exists_pred(t: Term) -> Self {
        Formula::Exists(t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn iq(x: impl Into<String>, a: Formula, b: Formula) -> Self {
        Formula::Iq(x.into(), Box::new(a), Box::new(b))
    }

    /// `A ∧ B` as `¬(A → ¬B)`.
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::imp(a, Formula::not(b)))
    }

    /// `A ∨ B` as `¬A → B`.
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::imp(Formula::not(a), b)
    }

    /// `∃x A` as `¬∀x¬A`.
    pub fn exists(x: impl Into<String>, a: Formula) -> Self {
        Formula::not(Formula::forall(x, Formula::not(a)))
    }

    /// `A ↔ B` as `(A → B) ∧ (B → A)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Splits an expanded biconditional back into its two sides.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let Formula::Not(inner) = self else { return None };
        let Formula::Imp(l, r) = inner.as_ref() else { return None };
        let Formula::Imp(a, b) = l.as_ref() else { return None };
        let Formula::Not(r) = r.as_ref() else { return None };
        let Formula::Imp(b2, a2) = r.as_ref() else { return None };
        (a == a2 && b == b2).then_some((a.as_ref(), b.as_ref()))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let from_term = |t: &Term, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| from_term(t, out)),
            Formula::Eq(l, r) => {
                from_term(l, out);
                from_term(r, out);
            }
            Formula::Exists(t) => from_term(t, out),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::Iq(x, a, b) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every identifier anywhere in the formula, binders included.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|t| t.collect_names(out));
            }
            Formula::Eq(l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
            Formula::Exists(t) => t.collect_names(out),
            Formula::Not(a) => a.collect_names(out),
            Formula::Imp(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Forall(x, a) => {
                out.insert(x.clone());
                a.collect_names(out);
            }
            Formula::Iq(x, a, b) => {
                out.insert(x.clone());
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    /// True iff `name` occurs anywhere: as a variable, constant, symbol or binder.
    pub fn occurs(&self, name: &str) -> bool {
        match self {
            Formula::Pred(p, args) => p == name || args.iter().any(|t| t.occurs(name)),
            Formula::Eq(l, r) => l.occurs(name) || r.occurs(name),
            Formula::Exists(t) => t.occurs(name),
            Formula::Not(a) => a.occurs(name),
            Formula::Imp(a, b) => a.occurs(name) || b.occurs(name),
            Formula::Forall(x, a) => x == name || a.occurs(name),
            Formula::Iq(x, a, b) => x == name || a.occurs(name) || b.occurs(name),
        }
    }

    /// Ground terms occurring in the formula (subterms included).
    pub fn ground_terms(&self, out: &mut BTreeSet<Term>) {
        let mut add = |t: &Term| {
            let mut subs = BTreeSet::new();
            t.subterms(&mut subs);
            out.extend(subs.into_iter().filter(Term::is_ground));
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(add),
            Formula::Eq(l, r) => {
                add(l);
                add(r);
            }
            Formula::Exists(t) => add(t),
            Formula::Not(a) | Formula::Forall(_, a) => a.ground_terms(out),
            Formula::Imp(a, b) | Formula::Iq(_, a, b) => {
                a.ground_terms(out);
                b.ground_terms(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => 0,
            Formula::Not(a) | Formula::Forall(_, a) => 1 + a.depth(),
            Formula::Imp(a, b) | Formula::Iq(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

/// Declared symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` declared twice with different kinds")]
    KindClash(String),
    #[error("symbol `{0}` needs arity >= 1")]
    ZeroArity(String),
    #[error("symbol `{name}` used with arity {found}, declared {expected}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate(usize),
    Function(usize),
    Constant,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if let Some(&n) = self.predicates.get(name) {
            Some(SymbolKind::Predicate(n))
        } else if let Some(&n) = self.functions.get(name) {
            Some(SymbolKind::Function(n))
        } else if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else {
            None
        }
    }

    fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<(), SignatureError> {
        match (self.kind_of(name), kind) {
            (None, SymbolKind::Predicate(0)) | (None, SymbolKind::Function(0)) => {
                Err(SignatureError::ZeroArity(name.to_string()))
            }
            (None, SymbolKind::Predicate(n)) => {
                self.predicates.insert(name.to_string(), n);
                Ok(())
            }
            (None, SymbolKind::Function(n)) => {
                self.functions.insert(name.to_string(), n);
                Ok(())
            }
            (None, SymbolKind::Constant) => {
                self.constants.insert(name.to_string());
                Ok(())
            }
            (Some(old), new) if old == new => Ok(()),
            (Some(SymbolKind::Predicate(e)), SymbolKind::Predicate(f))
            | (Some(SymbolKind::Function(e)), SymbolKind::Function(f)) => {
                Err(SignatureError::Arity {
                    name: name.to_string(),
                    expected: e,
                    found: f,
                })
            }
            _ => Err(SignatureError::KindClash(name.to_string())),
        }
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.declare(name, SymbolKind::Predicate(arity))?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.declare(name, SymbolKind::Function(arity))?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SignatureError> {
        self.declare(name, SymbolKind::Constant)?;
        Ok(self)
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.declare(name, SymbolKind::Constant)
    }

    /// Extends the signature with every symbol used in `a`.
    pub fn absorb_formula(&mut self, a: &Formula) -> Result<(), SignatureError> {
        match a {
            Formula::Pred(p, args) => {
                self.declare(p, SymbolKind::Predicate(args.len()))?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
            Formula::Eq(l, r) => {
                self.absorb_term(l)?;
                self.absorb_term(r)
            }
            Formula::Exists(t) => self.absorb_term(t),
            Formula::Not(a) | Formula::Forall(_, a) => self.absorb_formula(a),
            Formula::Imp(a, b) | Formula::Iq(_, a, b) => {
                self.absorb_formula(a)?;
                self.absorb_formula(b)
            }
        }
    }

    pub fn absorb_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => self.declare(c, SymbolKind::Constant),
            Term::App(f, args) => {
                self.declare(f, SymbolKind::Function(args.len()))?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
        }
    }

    /// Union of two signatures; fails on conflicting declarations.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for (p, &n) in &other.predicates {
            self.declare(p, SymbolKind::Predicate(n))?;
        }
        for (f, &n) in &other.functions {
            self.declare(f, SymbolKind::Function(n))?;
        }
        for c in &other.constants {
            self.declare(c, SymbolKind::Constant)?;
        }
        Ok(())
    }

    pub fn of_formulas<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for a in formulas {
            sig.absorb_formula(a)?;
        }
        Ok(sig)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
