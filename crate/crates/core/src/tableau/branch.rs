//! Branches, closure modulo identities, and single rule applications.

use std::collections::{BTreeMap, BTreeSet};

use super::{Budget, TableauError};
use crate::syntax::{fresh_name, print_formula, substitute, Formula, Term};

/// One branch of a ground tableau.
#[derive(Clone, Debug)]
pub struct Branch {
    /// In order of addition; no duplicates.
    pub formulas: Vec<Formula>,
    /// Ground terms on the branch in order of first appearance, subterms included.
    pub terms: Vec<Term>,
    /// Fresh parameters introduced so far.
    pub fresh_used: usize,
    /// γ-type instances applied so far.
    pub gamma_used: usize,
    seen: BTreeSet<Formula>,
    term_set: BTreeSet<Term>,
    names: BTreeSet<String>,
    /// Formulas whose once-only rule has been applied.
    applied: BTreeSet<usize>,
    /// (formula, term) pairs of applied γ instances.
    instances: BTreeSet<(usize, Term)>,
    /// Witness parameter of each `Ix[A, B]`.
    witnesses: BTreeMap<usize, Term>,
}

/// The result of one [`expand_step`].
#[derive(Clone, Debug)]
pub struct Expansion {
    pub rule: &'static str,
    pub principal: Formula,
    pub term: Option<Term>,
    /// Each child with the formulas it added.
    pub children: Vec<(Vec<Formula>, Branch)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Step {
    Alpha(usize),
    Delta(usize),
    Beta(usize),
    Gamma(usize, Term),
}

/// Alternatives of a rule instance, one formula list per child.
type Alternatives = Vec<Vec<Formula>>;

fn inst(a: &Formula, x: &str, t: &Term) -> Formula {
    substitute(a, x, t).expect("ground terms are free for any variable")
}

fn neg(a: Formula) -> Formula {
    Formula::not(a)
}

/// Equivalence classes of branch terms under the branch identities, closed
/// under congruence. Maps every branch term to the earliest term of its class.
#[derive(Clone, Debug)]
pub struct Classes {
    rep: BTreeMap<Term, Term>,
}

impl Classes {
    pub fn of(b: &Branch) -> Self {
        let n = b.terms.len();
        let index: BTreeMap<&Term, usize> = b.terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        // the earlier term becomes the root, so roots are class representatives
        fn union(parent: &mut [usize], i: usize, j: usize) -> bool {
            let (a, b) = (root(parent, i), root(parent, j));
            if a == b {
                return false;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
            true
        }
        for f in &b.formulas {
            if let Formula::Eq(l, r) = f {
                union(&mut parent, index[l], index[r]);
            }
        }
        let apps: Vec<(usize, &String, &Vec<Term>)> = b
            .terms
            .iter()
            .enumerate()
            .filter_map(|(i, t)| match t {
                Term::App(f, args) => Some((i, f, args)),
                _ => None,
            })
            .collect();
        loop {
            let mut changed = false;
            for (k, &(i, f, args)) in apps.iter().enumerate() {
                for &(j, g, brgs) in &apps[k + 1..] {
                    if f == g
                        && args.len() == brgs.len()
                        && args
                            .iter()
                            .zip(brgs)
                            .all(|(s, t)| root(&mut parent, index[s]) == root(&mut parent, index[t]))
                    {
                        changed |= union(&mut parent, i, j);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let rep = (0..n)
            .map(|i| (b.terms[i].clone(), b.terms[root(&mut parent, i)].clone()))
            .collect();
        Classes { rep }
    }

    /// Representative of a branch term; other terms are their own.
    pub fn rep<'a>(&'a self, t: &'a Term) -> &'a Term {
        self.rep.get(t).unwrap_or(t)
    }

    pub fn same(&self, s: &Term, t: &Term) -> bool {
        self.rep(s) == self.rep(t)
    }

    /// Distinct representatives, in order of first appearance.
    pub fn representatives(&self, terms: &[Term]) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for t in terms {
            let r = self.rep(t);
            if !out.contains(r) {
                out.push(r.clone());
            }
        }
        out
    }

    /// An atom with every argument replaced by its representative.
    pub fn normalize(&self, a: &Formula) -> Formula {
        match a {
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| self.rep(t).clone()).collect()),
            Formula::Eq(l, r) => Formula::Eq(self.rep(l).clone(), self.rep(r).clone()),
            Formula::Exists(t) => Formula::Exists(self.rep(t).clone()),
            other => other.clone(),
        }
    }
}

impl Branch {
    /// A root branch. If no term occurs, one fresh constant is seeded so the
    /// `∀` and `I` rules have something to instantiate.
    pub fn new(formulas: impl IntoIterator<Item = Formula>) -> Self {
        let mut b = Branch {
            formulas: Vec::new(),
            terms: Vec::new(),
            fresh_used: 0,
            gamma_used: 0,
            seen: BTreeSet::new(),
            term_set: BTreeSet::new(),
            names: BTreeSet::new(),
            applied: BTreeSet::new(),
            instances: BTreeSet::new(),
            witnesses: BTreeMap::new(),
        };
        for f in formulas {
            b.add(f);
        }
        if b.terms.is_empty() {
            let c = fresh_name("c", &b.names);
            b.names.insert(c.clone());
            b.add_term(Term::Const(c));
        }
        b
    }

    pub fn contains(&self, a: &Formula) -> bool {
        self.seen.contains(a)
    }

    /// Adds a formula; false if it was already there.
    pub fn add(&mut self, a: Formula) -> bool {
        if self.seen.contains(&a) {
            return false;
        }
        a.collect_names(&mut self.names);
        let mut ts = BTreeSet::new();
        a.ground_terms(&mut ts);
        // subterms before the terms containing them
        let mut ts: Vec<Term> = ts.into_iter().collect();
        ts.sort_by_key(Term::depth);
        for t in ts {
            self.add_term(t);
        }
        self.seen.insert(a.clone());
        self.formulas.push(a);
        true
    }

    fn add_term(&mut self, t: Term) {
        if self.term_set.insert(t.clone()) {
            t.collect_names(&mut self.names);
            self.terms.push(t);
        }
    }

    fn fresh(&mut self) -> Term {
        let a = fresh_name("a", &self.names);
        debug_assert!(!self.names.contains(&a));
        self.names.insert(a.clone());
        self.fresh_used += 1;
        Term::Const(a)
    }

    /// Why the branch is closed, if it is.
    pub fn closure(&self) -> Option<String> {
        for f in &self.formulas {
            if let Formula::Not(g) = f {
                if self.seen.contains(g.as_ref()) {
                    return Some(format!("{} and its negation", print_formula(g)));
                }
            }
        }
        let classes = Classes::of(self);
        let positive: BTreeSet<Formula> = self
            .formulas
            .iter()
            .filter(|f| f.is_atomic())
            .map(|f| classes.normalize(f))
            .collect();
        for f in &self.formulas {
            let Formula::Not(g) = f else { continue };
            match g.as_ref() {
                Formula::Eq(l, r) if classes.same(l, r) => {
                    return Some(format!("{} with {l} and {r} identified", print_formula(f)));
                }
                g if g.is_atomic() && positive.contains(&classes.normalize(g)) => {
                    return Some(format!("{} against an identical atom", print_formula(f)));
                }
                _ => {}
            }
        }
        None
    }

    /// Whether the once-only rules are all applied and every γ instance is
    /// applied or redundant; i.e. [`expand_step`] would find nothing.
    pub fn is_saturated(&self) -> bool {
        let mut b = self.clone();
        b.next_step(&Classes::of(self)).is_none()
    }

    fn kind(&self, i: usize) -> Option<Step> {
        match &self.formulas[i] {
            Formula::Not(g) => match g.as_ref() {
                Formula::Not(_) | Formula::Imp(..) => Some(Step::Alpha(i)),
                Formula::Forall(..) => Some(Step::Delta(i)),
                _ => None,
            },
            Formula::Imp(..) => Some(Step::Beta(i)),
            Formula::Iq(..) if !self.witnesses.contains_key(&i) => Some(Step::Delta(i)),
            _ => None,
        }
    }

    /// γ-type formulas are instantiated per term class.
    fn is_gamma(&self, i: usize) -> bool {
        match &self.formulas[i] {
            Formula::Forall(..) => true,
            Formula::Iq(..) => self.witnesses.contains_key(&i),
            Formula::Not(g) => matches!(g.as_ref(), Formula::Iq(..)),
            _ => false,
        }
    }

    /// Alternatives of a non-fresh instance, used for the redundancy check.
    fn alternatives(&self, step: &Step) -> Alternatives {
        match step {
            Step::Alpha(i) => match &self.formulas[*i] {
                Formula::Not(g) => match g.as_ref() {
                    Formula::Not(a) => vec![vec![(**a).clone()]],
                    Formula::Imp(a, b) => vec![vec![(**a).clone(), neg((**b).clone())]],
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            },
            Step::Beta(i) => match &self.formulas[*i] {
                Formula::Imp(a, b) => vec![vec![neg((**a).clone())], vec![(**b).clone()]],
                _ => unreachable!(),
            },
            Step::Gamma(i, t) => match &self.formulas[*i] {
                Formula::Forall(x, a) => vec![vec![neg(Formula::Exists(t.clone()))], vec![inst(a, x, t)]],
                Formula::Iq(x, a, _) => {
                    let w = self.witnesses[i].clone();
                    vec![vec![neg(inst(a, x, t))], vec![Formula::eq(w, t.clone())]]
                }
                Formula::Not(g) => match g.as_ref() {
                    Formula::Iq(x, a, b) => vec![vec![neg(inst(a, x, t))], vec![neg(inst(b, x, t))]],
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            },
            Step::Delta(_) => Vec::new(),
        }
    }

    fn redundant(&self, step: &Step) -> bool {
        self.alternatives(step)
            .iter()
            .any(|alt| alt.iter().all(|f| self.seen.contains(f)))
    }

    fn mark(&mut self, step: &Step) {
        match step {
            Step::Alpha(i) | Step::Beta(i) | Step::Delta(i) => {
                self.applied.insert(*i);
            }
            Step::Gamma(i, t) => {
                self.instances.insert((*i, t.clone()));
            }
        }
    }

    /// Next instance to apply: α before δ before β before γ; γ instances
    /// oldest term class first, so every instance is eventually scheduled.
    /// Redundant instances are marked applied on the way.
    fn next_step(&mut self, classes: &Classes) -> Option<Step> {
        for pass in 0..3 {
            for i in 0..self.formulas.len() {
                if self.applied.contains(&i) {
                    continue;
                }
                let Some(step) = self.kind(i) else { continue };
                let wanted = matches!(
                    (pass, &step),
                    (0, Step::Alpha(_)) | (1, Step::Delta(_)) | (2, Step::Beta(_))
                );
                if !wanted {
                    continue;
                }
                if self.redundant(&step) {
                    self.mark(&step);
                    continue;
                }
                return Some(step);
            }
        }
        let reps = classes.representatives(&self.terms);
        for t in &reps {
            for i in 0..self.formulas.len() {
                if !self.is_gamma(i) {
                    continue;
                }
                let done = self
                    .instances
                    .iter()
                    .any(|(j, s)| *j == i && classes.same(s, t));
                if done {
                    continue;
                }
                if let Some(w) = self.witnesses.get(&i) {
                    if classes.same(w, t) {
                        continue;
                    }
                }
                let step = Step::Gamma(i, t.clone());
                if self.redundant(&step) {
                    self.mark(&step);
                    continue;
                }
                return Some(step);
            }
        }
        None
    }
}

/// Applies the next rule instance to an open branch.
pub fn expand_step(b: &Branch, budget: &Budget) -> Result<Expansion, TableauError> {
    let mut work = b.clone();
    let classes = Classes::of(b);
    let step = work.next_step(&classes).ok_or(TableauError::NoApplicableRule)?;
    let needs_fresh = match &step {
        Step::Delta(_) => true,
        Step::Gamma(i, _) => matches!(&work.formulas[*i], Formula::Not(_)),
        _ => false,
    };
    if matches!(step, Step::Gamma(..)) && work.gamma_used >= budget.max_gamma {
        return Err(TableauError::BudgetExhausted("γ instances"));
    }
    if needs_fresh && work.fresh_used >= budget.max_fresh {
        return Err(TableauError::BudgetExhausted("fresh parameters"));
    }
    work.mark(&step);
    if matches!(step, Step::Gamma(..)) {
        work.gamma_used += 1;
    }
    let principal = match &step {
        Step::Alpha(i) | Step::Beta(i) | Step::Delta(i) | Step::Gamma(i, _) => work.formulas[*i].clone(),
    };
    let (rule, mut alts): (&'static str, Alternatives) = match &step {
        Step::Alpha(_) => {
            let rule = match &principal {
                Formula::Not(g) if matches!(g.as_ref(), Formula::Not(_)) => "¬¬",
                _ => "¬→",
            };
            (rule, work.alternatives(&step))
        }
        Step::Beta(_) => ("→", work.alternatives(&step)),
        Step::Delta(i) => match &principal {
            Formula::Not(g) => {
                let Formula::Forall(x, a) = g.as_ref() else { unreachable!() };
                let w = work.fresh();
                ("¬∀", vec![vec![Formula::Exists(w.clone()), neg(inst(a, x, &w))]])
            }
            Formula::Iq(x, a, c) => {
                let w = work.fresh();
                work.witnesses.insert(*i, w.clone());
                ("I", vec![vec![inst(a, x, &w), inst(c, x, &w)]])
            }
            _ => unreachable!(),
        },
        Step::Gamma(..) => {
            let rule = match &principal {
                Formula::Forall(..) => "∀",
                Formula::Iq(..) => "I-unique",
                _ => "¬I",
            };
            (rule, work.alternatives(&step))
        }
    };
    if let (Step::Gamma(_, t), Formula::Not(g)) = (&step, &principal) {
        if let Formula::Iq(x, a, _) = g.as_ref() {
            let w = work.fresh();
            alts.push(vec![inst(a, x, &w), neg(Formula::eq(w, t.clone()))]);
        }
    }
    let term = match &step {
        Step::Gamma(_, t) => Some(t.clone()),
        _ => None,
    };
    let children = alts
        .into_iter()
        .map(|alt| {
            let mut child = work.clone();
            let added: Vec<Formula> = alt.into_iter().filter(|f| child.add(f.clone())).collect();
            (added, child)
        })
        .collect();
    Ok(Expansion {
        rule,
        principal,
        term,
        children,
    })
}

pub fn is_closed(b: &Branch) -> bool {
    b.closure().is_some()
}
