//! Right and Left Reduction.
//!
//! `rr(d1, d2, A, k)`: `d1 ⊢ Θ ⇒ Λ, A` ends with a rule introducing `A`,
//! `d2 ⊢ A^k, Γ ⇒ Δ`; result `Θ^k, Γ ⇒ Λ^k, Δ`.
//!
//! `lr(d1, d2, A, k)`: `d1 ⊢ Γ ⇒ Δ, A^k`, `d2 ⊢ A, Θ ⇒ Λ`; result
//! `Γ, Θ^k ⇒ Δ, Λ^k`.
//!
//! Only `k` occurrences are tracked; further copies of `A` belong to the
//! context. A rule counts as acting on a tracked occurrence only when the
//! context alone has fewer than `k` copies. Every new cut is on a proper
//! subformula of `A` or on an atom, so all cuts in the result have degree
//! below `degree(A)` whenever that holds of the inputs.

use std::collections::BTreeSet;

use super::{
    cuts_below, degree, regularize_with, substitute_in_proof, CutElimError, TraceStep,
};
use crate::kernel::{
    leibniz, principal_formulas, weaken, MetaKey, MetaVal, ProofTree, Rule, RuleApp, RuleError,
    Sequent, SideCondition,
};
use crate::syntax::{fresh_name, print_formula, substitute, Formula, Term};

fn count(v: &[Formula], a: &Formula) -> usize {
    v.iter().filter(|f| *f == a).count()
}

fn times(v: &[Formula], k: usize) -> Vec<Formula> {
    (0..k).flat_map(|_| v.iter().cloned()).collect()
}

/// `v` with `k` copies of `a` removed.
fn minus(v: &[Formula], a: &Formula, k: usize) -> Vec<Formula> {
    let mut left = k;
    v.iter()
        .filter(|f| {
            if left > 0 && *f == a {
                left -= 1;
                false
            } else {
                true
            }
        })
        .cloned()
        .collect()
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn inst(a: &Formula, x: &str, t: &Term) -> Result<Formula, CutElimError> {
    substitute(a, x, t)
        .map_err(|_| CutElimError::Rule(RuleError::SideConditionViolated(SideCondition::Substitutability)))
}

fn reflexive(a: &Formula) -> Option<&Term> {
    match a {
        Formula::Eq(l, r) if l == r => Some(l),
        _ => None,
    }
}

fn cut(l: ProofTree, r: ProofTree, a: &Formula) -> Result<ProofTree, CutElimError> {
    Ok(ProofTree::infer(RuleApp::new(Rule::Cut).cut_formula(a.clone()), vec![l, r])?)
}

/// Weakens and contracts `p` until its conclusion is `target`.
fn adjust(p: ProofTree, target: &Sequent) -> Result<ProofTree, CutElimError> {
    let mut p = p;
    for ante in [true, false] {
        let side = |q: &Sequent| if ante { q.ante.clone() } else { q.succ.clone() };
        let want = side(target);
        let mut seen: Vec<Formula> = Vec::new();
        for f in side(&p.conclusion).iter().chain(&want) {
            if seen.contains(f) {
                continue;
            }
            seen.push(f.clone());
            let (h, w) = (count(&side(&p.conclusion), f), count(&want, f));
            if h > w && w == 0 {
                return Err(CutElimError::PreconditionViolated(format!(
                    "cannot drop `{}` from {}",
                    print_formula(f),
                    p.conclusion
                )));
            }
            for _ in w..h {
                let rule = if ante { Rule::LC } else { Rule::RC };
                p = ProofTree::infer(RuleApp::new(rule).fa(f.clone()), vec![p])?;
            }
            let extra = times(std::slice::from_ref(f), w.saturating_sub(h));
            p = if ante {
                weaken(p, &extra, &[])
            } else {
                weaken(p, &[], &extra)
            };
        }
    }
    debug_assert_eq!(p.conclusion, *target);
    p.conclusion = target.clone();
    Ok(p)
}

/// Whether the last rule's principal formula must be a tracked occurrence.
fn acts_on_tracked(principal: &[Formula], all: &[Formula], a: &Formula, k: usize) -> bool {
    let p = count(principal, a);
    p > 0 && count(all, a) - p < k
}

pub(crate) struct Reducer {
    avoid: BTreeSet<String>,
    pub trace: Vec<TraceStep>,
}

impl Reducer {
    pub fn new(avoid: BTreeSet<String>) -> Self {
        Reducer {
            avoid,
            trace: Vec::new(),
        }
    }

    fn note(&mut self, case: &'static str, a: &Formula) {
        self.trace.push(TraceStep {
            case,
            cut_formula: print_formula(a),
            degree: degree(a),
        });
    }

    /// Same proof with the last rule's eigen-parameter renamed to a fresh one.
    fn rename_eigen(&mut self, p: &ProofTree) -> ProofTree {
        let e = p.app.eigen().expect("rule has an eigen-parameter").to_string();
        let fresh = fresh_name(&e, &self.avoid);
        self.avoid.insert(fresh.clone());
        let term = Term::Const(fresh.clone());
        let mut app = p.app.clone();
        app.meta.insert(MetaKey::Param, MetaVal::Name(fresh));
        ProofTree {
            conclusion: p.conclusion.clone(),
            app,
            premises: p
                .premises
                .iter()
                .map(|q| substitute_in_proof(q, &e, &term).expect("fresh names never clash"))
                .collect(),
        }
    }

    /// Substitution lemma, renaming inner eigen-parameters on a clash.
    fn subst(&mut self, p: &ProofTree, a: &str, t: &Term) -> Result<ProofTree, CutElimError> {
        match substitute_in_proof(p, a, t) {
            Err(CutElimError::EigenClash { .. }) => {
                t.collect_names(&mut self.avoid);
                let q = regularize_with(p, &mut self.avoid);
                substitute_in_proof(&q, a, t)
            }
            r => r,
        }
    }

    fn stuck(&self, a: &Formula, d1: &ProofTree, d2: &ProofTree) -> CutElimError {
        CutElimError::StuckAtomicCut {
            formula: print_formula(a),
            left: d1.app.rule,
            right: d2.app.rule,
        }
    }

    pub fn rr(
        &mut self,
        d1: &ProofTree,
        d2: &ProofTree,
        a: &Formula,
        k: usize,
    ) -> Result<ProofTree, CutElimError> {
        if k == 0 {
            return Ok(d2.clone());
        }
        let theta = &d1.conclusion.ante;
        let lambda = minus(&d1.conclusion.succ, a, 1);
        let target = Sequent::new(
            cat(&[&times(theta, k), &minus(&d2.conclusion.ante, a, k)]),
            cat(&[&times(&lambda, k), &d2.conclusion.succ]),
        );
        if let Some(t) = reflexive(a) {
            self.note("R:refl", a);
            let mut p = d2.clone();
            for _ in 0..k {
                p = ProofTree::infer(RuleApp::new(Rule::EqE).t(t.clone()), vec![p])?;
            }
            return adjust(p, &target);
        }
        if d1.app.rule == Rule::Ax {
            self.note("R:axiom", a);
            return adjust(d2.clone(), &target);
        }
        let renamed;
        let d2 = match d2.app.eigen() {
            Some(e) if d1.conclusion.occurs(e) => {
                renamed = self.rename_eigen(d2);
                &renamed
            }
            _ => d2,
        };
        let rule = d2.app.rule;
        if rule == Rule::Ax {
            self.note("R:axiom", a);
            return adjust(d1.clone(), &target);
        }
        if rule == Rule::Cut {
            let (l, r) = (&d2.premises[0], &d2.premises[1]);
            let c = d2.app.get_formula(MetaKey::CutFormula)?;
            let kl = k.min(count(&l.conclusion.ante, a));
            let l = self.rr(d1, l, a, kl)?;
            let r = self.rr(d1, r, a, k - kl)?;
            self.note("R:param", a);
            return adjust(cut(l, r, c)?, &target);
        }
        let (principal, _) = principal_formulas(&d2.app)?;
        if !acts_on_tracked(&principal, &d2.conclusion.ante, a, k) {
            let premises = d2
                .premises
                .iter()
                .map(|q| self.rr(d1, q, a, k))
                .collect::<Result<Vec<_>, _>>()?;
            self.note("R:param", a);
            return adjust(ProofTree::infer(d2.app.clone(), premises)?, &target);
        }
        let prem = |i: usize| &d2.premises[i];
        let out = match (d1.app.rule, rule) {
            (_, Rule::LW) => {
                self.note("R:LW", a);
                self.rr(d1, prem(0), a, k - 1)?
            }
            (_, Rule::LC) => {
                self.note("R:LC", a);
                self.rr(d1, prem(0), a, k + 1)?
            }
            (_, Rule::EqI) => {
                let x = d2.app.get_name(MetaKey::X)?;
                let b = d2.app.get_formula(MetaKey::A)?;
                let (t1, t2) = (d2.app.get_term(MetaKey::T1)?, d2.app.get_term(MetaKey::T2)?);
                if inst(b, x, t1)? != inst(b, x, t2)? {
                    return Err(self.stuck(a, d1, d2));
                }
                // the step only adds `t1 = t2`
                self.note("R:EqI-weak", a);
                let eq = Formula::eq(t1.clone(), t2.clone());
                let k2 = if *a == eq { k - 1 } else { k };
                self.rr(d1, prem(0), a, k2)?
            }
            (Rule::RNeg, Rule::LNeg) => {
                self.note("R:neg", a);
                let Formula::Not(b) = a else { unreachable!() };
                let p = self.rr(d1, prem(0), a, k - 1)?;
                cut(p, d1.premises[0].clone(), b)?
            }
            (Rule::RImp, Rule::LImp) => {
                self.note("R:imp", a);
                let Formula::Imp(b, c) = a else { unreachable!() };
                let p0 = self.rr(d1, prem(0), a, k - 1)?;
                let p1 = self.rr(d1, prem(1), a, k - 1)?;
                let x = cut(p0, d1.premises[0].clone(), b)?;
                cut(x, p1, c)?
            }
            (Rule::RForall, Rule::LForall) if matches!(a, Formula::Forall(..)) => {
                self.note("R:forall", a);
                let Formula::Forall(x, b) = a else { unreachable!() };
                let t = d2.app.get_term(MetaKey::T)?;
                let e = d1.app.get_name(MetaKey::Param)?;
                let q = self.subst(&d1.premises[0], e, t)?;
                let p = self.rr(d1, prem(0), a, k - 1)?;
                cut(q, p, &inst(b, x, t)?)?
            }
            (Rule::RI, Rule::LI1) => {
                self.note("R:LI1", a);
                let Formula::Iq(x, f, g) = a else { unreachable!() };
                let t = d1.app.get_term(MetaKey::T)?;
                let b = d2.app.get_name(MetaKey::Param)?;
                let p = self.rr(d1, prem(0), a, k - 1)?;
                let s = self.subst(&p, b, t)?;
                let c1 = cut(d1.premises[0].clone(), s, &inst(f, x, t)?)?;
                cut(d1.premises[1].clone(), c1, &inst(g, x, t)?)?
            }
            (Rule::RI, Rule::LI2) => {
                self.note("R:LI2", a);
                self.ri_li2(d1, d2, a, k)?
            }
            _ if a.is_atomic() => return Err(self.stuck(a, d1, d2)),
            (l, r) => {
                return Err(CutElimError::PreconditionViolated(format!(
                    "`{}` introduced by {l:?} but used by {r:?}",
                    print_formula(a)
                )))
            }
        };
        adjust(out, &target)
    }

    // d1 = RI(t, e) ⊢ Θ ⇒ Λ, Ix[F, G]; d2 = LI2(t1, t2, C) ⊢ Ix[F, G]^k, Γ ⇒ Δ', C(t1)
    fn ri_li2(
        &mut self,
        d1: &ProofTree,
        d2: &ProofTree,
        a: &Formula,
        k: usize,
    ) -> Result<ProofTree, CutElimError> {
        let Formula::Iq(x, f, _) = a else { unreachable!() };
        let t = d1.app.get_term(MetaKey::T)?.clone();
        let e = d1.app.get_name(MetaKey::Param)?.to_string();
        let cx = d2.app.get_name(MetaKey::X)?;
        let c = d2.app.get_formula(MetaKey::C)?;
        let (t1, t2) = (d2.app.get_term(MetaKey::T1)?, d2.app.get_term(MetaKey::T2)?);

        let p1 = self.rr(d1, &d2.premises[0], a, k - 1)?;
        let p2 = self.rr(d1, &d2.premises[1], a, k - 1)?;
        let p3 = self.rr(d1, &d2.premises[2], a, k - 1)?;
        // F(t1), Θ ⇒ Λ, t1 = t  and  F(t2), Θ ⇒ Λ, t2 = t
        let p5 = self.subst(&d1.premises[2], &e, t1)?;
        let p6 = self.subst(&d1.premises[2], &e, t2)?;
        let y = fresh_name("y", &self.avoid);
        // t2 = t, t1 = t ⇒ t1 = t2
        let p7 = leibniz(&y, &Formula::eq(t1.clone(), Term::Var(y.clone())), t2, &t)?;
        // t1 = t2, C(t2) ⇒ C(t1)
        let p8 = leibniz(cx, c, t1, t2)?;

        let t1t = Formula::eq(t1.clone(), t.clone());
        let t2t = Formula::eq(t2.clone(), t.clone());
        let t12 = Formula::eq(t1.clone(), t2.clone());
        let e1 = cut(p1, p5, &inst(f, x, t1)?)?;
        let e2 = cut(p2, p6, &inst(f, x, t2)?)?;
        let m_n = e1.conclusion.clone();
        let xx = cut(e1, p7, &t1t)?;
        let yy = cut(e2, xx, &t2t)?;
        let e3 = adjust(
            yy,
            &Sequent::new(m_n.ante.clone(), cat(&[&minus(&m_n.succ, &t1t, 1), std::slice::from_ref(&t12)])),
        )?;
        let z = cut(e3, p8, &t12)?;
        cut(p3, z, &inst(c, cx, t2)?)
    }

    pub fn lr(
        &mut self,
        d1: &ProofTree,
        d2: &ProofTree,
        a: &Formula,
        k: usize,
    ) -> Result<ProofTree, CutElimError> {
        if k == 0 {
            return Ok(d1.clone());
        }
        let theta = minus(&d2.conclusion.ante, a, 1);
        let lambda = &d2.conclusion.succ;
        let target = Sequent::new(
            cat(&[&d1.conclusion.ante, &times(&theta, k)]),
            cat(&[&minus(&d1.conclusion.succ, a, k), &times(lambda, k)]),
        );
        if let Some(t) = reflexive(a) {
            self.note("L:refl", a);
            let p = ProofTree::infer(RuleApp::new(Rule::EqE).t(t.clone()), vec![d2.clone()])?;
            return adjust(p, &target);
        }
        if d1.app.rule == Rule::Ax {
            self.note("L:axiom", a);
            return adjust(d2.clone(), &target);
        }
        let renamed;
        let d1 = match d1.app.eigen() {
            Some(e) if d2.conclusion.occurs(e) => {
                renamed = self.rename_eigen(d1);
                &renamed
            }
            _ => d1,
        };
        let rule = d1.app.rule;
        if rule == Rule::Cut {
            let (l, r) = (&d1.premises[0], &d1.premises[1]);
            let c = d1.app.get_formula(MetaKey::CutFormula)?;
            let kr = k.min(count(&r.conclusion.succ, a));
            let l = self.lr(l, d2, a, k - kr)?;
            let r = self.lr(r, d2, a, kr)?;
            self.note("L:param", a);
            return adjust(cut(l, r, c)?, &target);
        }
        let (_, principal) = principal_formulas(&d1.app)?;
        if !acts_on_tracked(&principal, &d1.conclusion.succ, a, k) {
            let premises = d1
                .premises
                .iter()
                .map(|q| self.lr(q, d2, a, k))
                .collect::<Result<Vec<_>, _>>()?;
            self.note("L:param", a);
            return adjust(ProofTree::infer(d1.app.clone(), premises)?, &target);
        }
        let out = match rule {
            Rule::RW => {
                self.note("L:RW", a);
                self.lr(&d1.premises[0], d2, a, k - 1)?
            }
            Rule::RC => {
                self.note("L:RC", a);
                self.lr(&d1.premises[0], d2, a, k + 1)?
            }
            Rule::LI2 if {
                let x = d1.app.get_name(MetaKey::X)?;
                let c = d1.app.get_formula(MetaKey::C)?;
                inst(c, x, d1.app.get_term(MetaKey::T1)?)? == inst(c, x, d1.app.get_term(MetaKey::T2)?)?
            } =>
            {
                // the third premise already proves the same atom
                self.note("L:LI2-trivial", a);
                self.lr(&d1.premises[2], d2, a, k)?
            }
            Rule::RNeg | Rule::RImp | Rule::RForall | Rule::RI | Rule::LI2 => {
                let premises = d1
                    .premises
                    .iter()
                    .map(|q| self.lr(q, d2, a, k - 1))
                    .collect::<Result<Vec<_>, _>>()?;
                let d1 = ProofTree::infer(d1.app.clone(), premises)?;
                self.note("L:intro", a);
                self.rr(&d1, d2, a, 1)?
            }
            r => {
                return Err(CutElimError::PreconditionViolated(format!(
                    "{r:?} does not introduce `{}` on the right",
                    print_formula(a)
                )))
            }
        };
        adjust(out, &target)
    }
}

fn check_inputs(d1: &ProofTree, d2: &ProofTree, a: &Formula) -> Result<(), CutElimError> {
    for p in [d1, d2] {
        crate::kernel::check_proof(p).map_err(CutElimError::Invalid)?;
        if !cuts_below(p, degree(a)) {
            return Err(CutElimError::PreconditionViolated(format!(
                "premises must only contain cuts of degree below {}",
                degree(a)
            )));
        }
    }
    Ok(())
}

fn reducer(d1: &ProofTree, d2: &ProofTree, a: &Formula) -> Reducer {
    let mut avoid = d1.names();
    avoid.extend(d2.names());
    avoid.extend(a.names());
    Reducer::new(avoid)
}

/// From `d1 ⊢ Θ ⇒ Λ, A` whose last rule introduces `A` and `d2 ⊢ A^k, Γ ⇒ Δ`,
/// a proof of `Θ^k, Γ ⇒ Λ^k, Δ` with all cuts below the degree of `A`.
pub fn right_reduce(
    d1: &ProofTree,
    d2: &ProofTree,
    a: &Formula,
    k: usize,
) -> Result<ProofTree, CutElimError> {
    check_inputs(d1, d2, a)?;
    let (principal_ante, principal_succ) = principal_formulas(&d1.app)?;
    let intro = d1.app.rule == Rule::Ax || (principal_succ.contains(a) && !principal_ante.contains(a));
    if !intro || matches!(d1.app.rule, Rule::RW | Rule::RC) {
        return Err(CutElimError::PreconditionViolated(format!(
            "last rule of the left proof does not introduce `{}`",
            print_formula(a)
        )));
    }
    if count(&d2.conclusion.ante, a) < k || count(&d1.conclusion.succ, a) == 0 {
        return Err(CutElimError::PreconditionViolated("not enough occurrences".into()));
    }
    reducer(d1, d2, a).rr(d1, d2, a, k)
}

/// From `d1 ⊢ Γ ⇒ Δ, A^k` and `d2 ⊢ A, Θ ⇒ Λ`, a proof of `Γ, Θ^k ⇒ Δ, Λ^k`
/// with all cuts below the degree of `A`.
pub fn left_reduce(
    d1: &ProofTree,
    d2: &ProofTree,
    a: &Formula,
    k: usize,
) -> Result<ProofTree, CutElimError> {
    check_inputs(d1, d2, a)?;
    if count(&d1.conclusion.succ, a) < k || count(&d2.conclusion.ante, a) == 0 {
        return Err(CutElimError::PreconditionViolated("not enough occurrences".into()));
    }
    reducer(d1, d2, a).lr(d1, d2, a, k)
}
