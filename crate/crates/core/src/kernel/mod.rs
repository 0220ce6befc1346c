//! Multiset sequents, rule applications with explicit instantiation data, and
//! a deterministic proof checker.

mod check;
mod corpus;
mod derived;
mod format;
mod macros;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{print_formula, Formula, Term};

pub use check::{check_proof, check_rule, ProofError};
pub(crate) use check::principal_formulas;
pub use corpus::{
    derivation_corpus, fl_analogue_for, half_ll_for, leibniz_mimic_1_for, leibniz_mimic_2_for,
    CorpusEntry,
};
pub use derived::{identity_law, leibniz, leibniz_forward, weaken, weaken_to};
pub use format::{parse_proof, print_proof, FormatError};
pub use macros::expand_macros;

/// `Γ ⇒ Δ` over finite multisets. Equality ignores order but counts copies.
#[derive(Clone, Debug, Default, Eq)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Self {
        Sequent { ante, succ }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn occurs(&self, name: &str) -> bool {
        self.formulas().any(|a| a.occurs(name))
    }

    pub fn is_closed(&self) -> bool {
        self.formulas().all(|a| a.free_vars().is_empty())
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        same_multiset(&self.ante, &other.ante) && same_multiset(&self.succ, &other.succ)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[Formula]| v.iter().map(print_formula).collect::<Vec<_>>().join(", ");
        match (self.ante.is_empty(), self.succ.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {}", side(&self.succ)),
            (false, true) => write!(f, "{} |-", side(&self.ante)),
            (false, false) => write!(f, "{} |- {}", side(&self.ante), side(&self.succ)),
        }
    }
}

pub(crate) fn same_multiset(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a: Vec<&Formula> = a.iter().collect();
    let mut b: Vec<&Formula> = b.iter().collect();
    a.sort();
    b.sort();
    a == b
}

/// `whole − part` as multisets, or `None` if `part` is not contained.
pub(crate) fn multiset_minus(whole: &[Formula], part: &[Formula]) -> Option<Vec<Formula>> {
    let mut rest = whole.to_vec();
    for a in part {
        let i = rest.iter().position(|b| b == a)?;
        rest.remove(i);
    }
    Some(rest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    Ax,
    Cut,
    LW,
    RW,
    LC,
    RC,
    LNeg,
    RNeg,
    LImp,
    RImp,
    LForall,
    RForall,
    EqI,
    EqE,
    RI,
    LI1,
    LI2,
    LIff,
    RIff,
}

impl Rule {
    pub const ALL: [Rule; 19] = [
        Rule::Ax,
        Rule::Cut,
        Rule::LW,
        Rule::RW,
        Rule::LC,
        Rule::RC,
        Rule::LNeg,
        Rule::RNeg,
        Rule::LImp,
        Rule::RImp,
        Rule::LForall,
        Rule::RForall,
        Rule::EqI,
        Rule::EqE,
        Rule::RI,
        Rule::LI1,
        Rule::LI2,
        Rule::LIff,
        Rule::RIff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "Ax",
            Rule::Cut => "Cut",
            Rule::LW => "LW",
            Rule::RW => "RW",
            Rule::LC => "LC",
            Rule::RC => "RC",
            Rule::LNeg => "LNeg",
            Rule::RNeg => "RNeg",
            Rule::LImp => "LImp",
            Rule::RImp => "RImp",
            Rule::LForall => "LForall",
            Rule::RForall => "RForall",
            Rule::EqI => "EqI",
            Rule::EqE => "EqE",
            Rule::RI => "RI",
            Rule::LI1 => "LI1",
            Rule::LI2 => "LI2",
            Rule::LIff => "LIff",
            Rule::RIff => "RIff",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Ax => 0,
            Rule::Cut | Rule::LImp | Rule::LIff | Rule::RIff => 2,
            Rule::RI | Rule::LI2 => 3,
            _ => 1,
        }
    }

    /// Keys the rule's instantiation data must carry, no more and no fewer.
    pub fn meta_keys(self) -> &'static [MetaKey] {
        use MetaKey::*;
        match self {
            Rule::Ax | Rule::LW | Rule::RW | Rule::LC | Rule::RC | Rule::LNeg | Rule::RNeg => &[A],
            Rule::Cut => &[CutFormula],
            Rule::LImp | Rule::RImp | Rule::LIff | Rule::RIff => &[A, B],
            Rule::LForall => &[X, A, T],
            Rule::RForall => &[X, A, Param],
            Rule::EqI => &[X, A, T1, T2],
            Rule::EqE => &[T],
            Rule::RI => &[X, A, B, T, Param],
            Rule::LI1 => &[X, A, B, Param],
            Rule::LI2 => &[X, A, B, C, T1, T2],
        }
    }

    /// Rules whose parameter must not occur in the conclusion.
    pub fn has_eigen(self) -> bool {
        matches!(self, Rule::RForall | Rule::RI | Rule::LI1)
    }

    pub fn is_macro(self) -> bool {
        matches!(self, Rule::LIff | Rule::RIff)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaKey {
    /// bound variable
    X,
    /// eigen-parameter
    Param,
    T,
    T1,
    T2,
    A,
    B,
    C,
    CutFormula,
}

impl MetaKey {
    pub const ALL: [MetaKey; 9] = [
        MetaKey::X,
        MetaKey::Param,
        MetaKey::T,
        MetaKey::T1,
        MetaKey::T2,
        MetaKey::A,
        MetaKey::B,
        MetaKey::C,
        MetaKey::CutFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetaKey::X => "x",
            MetaKey::Param => "a",
            MetaKey::T => "t",
            MetaKey::T1 => "t1",
            MetaKey::T2 => "t2",
            MetaKey::A => "A",
            MetaKey::B => "B",
            MetaKey::C => "C",
            MetaKey::CutFormula => "cutFormula",
        }
    }

    pub fn from_name(s: &str) -> Option<MetaKey> {
        MetaKey::ALL.iter().copied().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetaVal {
    Name(String),
    Term(Term),
    Formula(Formula),
}

/// A rule name plus the instantiation of its schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApp {
    pub rule: Rule,
    pub meta: BTreeMap<MetaKey, MetaVal>,
}

impl RuleApp {
    pub fn new(rule: Rule) -> Self {
        RuleApp {
            rule,
            meta: BTreeMap::new(),
        }
    }

    pub fn x(mut self, x: impl Into<String>) -> Self {
        self.meta.insert(MetaKey::X, MetaVal::Name(x.into()));
        self
    }

    pub fn param(mut self, a: impl Into<String>) -> Self {
        self.meta.insert(MetaKey::Param, MetaVal::Name(a.into()));
        self
    }

    pub fn term(mut self, key: MetaKey, t: Term) -> Self {
        self.meta.insert(key, MetaVal::Term(t));
        self
    }

    pub fn t(self, t: Term) -> Self {
        self.term(MetaKey::T, t)
    }

    pub fn t1(self, t: Term) -> Self {
        self.term(MetaKey::T1, t)
    }

    pub fn t2(self, t: Term) -> Self {
        self.term(MetaKey::T2, t)
    }

    pub fn formula(mut self, key: MetaKey, a: Formula) -> Self {
        self.meta.insert(key, MetaVal::Formula(a));
        self
    }

    pub fn fa(self, a: Formula) -> Self {
        self.formula(MetaKey::A, a)
    }

    pub fn fb(self, b: Formula) -> Self {
        self.formula(MetaKey::B, b)
    }

    pub fn fc(self, c: Formula) -> Self {
        self.formula(MetaKey::C, c)
    }

    pub fn cut_formula(self, a: Formula) -> Self {
        self.formula(MetaKey::CutFormula, a)
    }

    pub fn get_name(&self, key: MetaKey) -> Result<&str, RuleError> {
        match self.meta.get(&key) {
            Some(MetaVal::Name(n)) => Ok(n),
            Some(_) => Err(RuleError::MetaKind(key.name())),
            None => Err(RuleError::MetaMissing(key.name())),
        }
    }

    pub fn get_term(&self, key: MetaKey) -> Result<&Term, RuleError> {
        match self.meta.get(&key) {
            Some(MetaVal::Term(t)) => Ok(t),
            Some(_) => Err(RuleError::MetaKind(key.name())),
            None => Err(RuleError::MetaMissing(key.name())),
        }
    }

    pub fn get_formula(&self, key: MetaKey) -> Result<&Formula, RuleError> {
        match self.meta.get(&key) {
            Some(MetaVal::Formula(a)) => Ok(a),
            Some(_) => Err(RuleError::MetaKind(key.name())),
            None => Err(RuleError::MetaMissing(key.name())),
        }
    }

    /// The eigen-parameter, for `RForall`, `RI` and `LI1`.
    pub fn eigen(&self) -> Option<&str> {
        if self.rule.has_eigen() {
            self.get_name(MetaKey::Param).ok()
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SideCondition {
    Eigenvariable,
    Substitutability,
    Atomicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("side condition violated: {0:?}")]
    SideConditionViolated(SideCondition),
    #[error("rule expects {expected} premises, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("missing instantiation key `{0}`")]
    MetaMissing(&'static str),
    #[error("unexpected instantiation key `{0}`")]
    MetaUnexpected(&'static str),
    #[error("instantiation key `{0}` has the wrong kind of value")]
    MetaKind(&'static str),
}

/// A derivation: a conclusion, the rule that produced it, and the premises'
/// derivations.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub app: RuleApp,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    /// Applies `app` to `premises`, computing the conclusion from the schema.
    /// The context is read off the first premise; the result is then checked.
    pub fn infer(app: RuleApp, premises: Vec<ProofTree>) -> Result<ProofTree, RuleError> {
        let prem: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        let conclusion = check::conclusion_for(&app, &prem)?;
        check_rule(&app, &prem, &conclusion)?;
        Ok(ProofTree {
            conclusion,
            app,
            premises,
        })
    }

    pub fn axiom(a: Formula) -> ProofTree {
        ProofTree {
            conclusion: Sequent::new(vec![a.clone()], vec![a.clone()]),
            app: RuleApp::new(Rule::Ax).fa(a),
            premises: Vec::new(),
        }
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        usize::from(self.app.rule == rule)
            + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    pub fn is_cut_free(&self) -> bool {
        self.count_rule(Rule::Cut) == 0
    }

    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }

    /// Every identifier used anywhere in the proof, metadata included.
    pub fn names(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for node in self.nodes() {
            node.conclusion.formulas().for_each(|a| a.collect_names(&mut out));
            for v in node.app.meta.values() {
                match v {
                    MetaVal::Name(n) => {
                        out.insert(n.clone());
                    }
                    MetaVal::Term(t) => t.collect_names(&mut out),
                    MetaVal::Formula(a) => a.collect_names(&mut out),
                }
            }
        }
        out
    }
}
