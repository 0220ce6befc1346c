//! Derived rules built from the primitive ones.

use std::collections::BTreeSet;

use super::{multiset_minus, ProofTree, Rule, RuleApp, RuleError, Sequent, SideCondition};
use crate::syntax::{fresh_name, substitute, Formula, Term};

/// Adds `ante` and `succ` to the conclusion by `LW`/`RW` steps.
pub fn weaken(p: ProofTree, ante: &[Formula], succ: &[Formula]) -> ProofTree {
    let mut p = p;
    for a in ante.iter().rev() {
        p = ProofTree::infer(RuleApp::new(Rule::LW).fa(a.clone()), vec![p])
            .expect("weakening always applies");
    }
    for a in succ {
        p = ProofTree::infer(RuleApp::new(Rule::RW).fa(a.clone()), vec![p])
            .expect("weakening always applies");
    }
    p
}

/// Weakens `p` until its conclusion is exactly `target` (as multisets).
pub fn weaken_to(p: ProofTree, target: &Sequent) -> Result<ProofTree, RuleError> {
    let extra_ante = multiset_minus(&target.ante, &p.conclusion.ante).ok_or_else(|| {
        RuleError::ContextMismatch(format!("cannot weaken {} to {}", p.conclusion, target))
    })?;
    let extra_succ = multiset_minus(&target.succ, &p.conclusion.succ).ok_or_else(|| {
        RuleError::ContextMismatch(format!("cannot weaken {} to {}", p.conclusion, target))
    })?;
    Ok(weaken(p, &extra_ante, &extra_succ))
}

/// `⇒ t = t`.
pub fn identity_law(t: &Term) -> ProofTree {
    let tt = Formula::eq(t.clone(), t.clone());
    ProofTree::infer(
        RuleApp::new(Rule::EqE).t(t.clone()),
        vec![ProofTree::axiom(tt)],
    )
    .expect("identity law")
}

fn inst(a: &Formula, x: &str, t: &Term) -> Result<Formula, RuleError> {
    substitute(a, x, t).map_err(|_| RuleError::SideConditionViolated(SideCondition::Substitutability))
}

/// Leibniz' Law `t1 = t2, A(t2) ⇒ A(t1)` for any formula `A` with `x` free.
///
/// Atomic instances use `=I` twice and `=E`; compound ones are built by
/// induction on `A` without cuts. Terms must be ground.
pub fn leibniz(x: &str, a: &Formula, t1: &Term, t2: &Term) -> Result<ProofTree, RuleError> {
    let mut avoid = a.names();
    t1.collect_names(&mut avoid);
    t2.collect_names(&mut avoid);
    transport(x, a, t1, t2, false, &mut avoid)
}

/// `t1 = t2, A(t1) ⇒ A(t2)` for any formula `A` with `x` free.
pub fn leibniz_forward(x: &str, a: &Formula, t1: &Term, t2: &Term) -> Result<ProofTree, RuleError> {
    let mut avoid = a.names();
    t1.collect_names(&mut avoid);
    t2.collect_names(&mut avoid);
    transport(x, a, t1, t2, true, &mut avoid)
}

// forward: t1=t2, A(t1) ⇒ A(t2); backward: t1=t2, A(t2) ⇒ A(t1)
fn transport(
    x: &str,
    a: &Formula,
    t1: &Term,
    t2: &Term,
    forward: bool,
    avoid: &mut BTreeSet<String>,
) -> Result<ProofTree, RuleError> {
    if !t1.is_ground() || !t2.is_ground() {
        return Err(RuleError::SideConditionViolated(SideCondition::Substitutability));
    }
    let eq = Formula::eq(t1.clone(), t2.clone());
    let (s, u) = if forward { (t1, t2) } else { (t2, t1) };
    let a_s = inst(a, x, s)?;
    let a_u = inst(a, x, u)?;
    if !a.free_vars().contains(x) {
        return Ok(weaken(ProofTree::axiom(a_s), &[eq], &[]));
    }
    let step = |app: RuleApp, prem: Vec<ProofTree>| ProofTree::infer(app, prem);
    match a {
        Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => {
            let eqi = |t1: &Term, t2: &Term, body: &Formula, p: ProofTree| {
                step(
                    RuleApp::new(Rule::EqI).x(x).fa(body.clone()).t1(t1.clone()).t2(t2.clone()),
                    vec![p],
                )
            };
            if forward {
                eqi(t1, t2, a, ProofTree::axiom(a_u))
            } else {
                // t2=t1, A(t2) ⇒ A(t1); then t1=t2, t1=t1, A(t2) ⇒ A(t1); then =E
                let p = eqi(t2, t1, a, ProofTree::axiom(a_u))?;
                let z = fresh_name("z", avoid);
                avoid.insert(z.clone());
                let shape = Formula::eq(Term::Var(z.clone()), t1.clone());
                let p = step(
                    RuleApp::new(Rule::EqI).x(z).fa(shape).t1(t1.clone()).t2(t2.clone()),
                    vec![p],
                )?;
                step(RuleApp::new(Rule::EqE).t(t1.clone()), vec![p])
            }
        }
        Formula::Not(b) => {
            let p = transport(x, b, t1, t2, !forward, avoid)?;
            let (b_s, b_u) = (inst(b, x, s)?, inst(b, x, u)?);
            let p = step(RuleApp::new(Rule::LNeg).fa(b_s), vec![p])?;
            step(RuleApp::new(Rule::RNeg).fa(b_u), vec![p])
        }
        Formula::Imp(b, c) => {
            let (b_s, b_u) = (inst(b, x, s)?, inst(b, x, u)?);
            let (c_s, c_u) = (inst(c, x, s)?, inst(c, x, u)?);
            let pb = weaken(transport(x, b, t1, t2, !forward, avoid)?, &[], std::slice::from_ref(&c_u));
            let pc = weaken(transport(x, c, t1, t2, forward, avoid)?, std::slice::from_ref(&b_u), &[]);
            let p = step(RuleApp::new(Rule::LImp).fa(b_s).fb(c_s), vec![pb, pc])?;
            step(RuleApp::new(Rule::RImp).fa(b_u).fb(c_u), vec![p])
        }
        Formula::Forall(y, b) => {
            let e = fresh_name("e", avoid);
            avoid.insert(e.clone());
            let ec = Term::Const(e.clone());
            let be = inst(b, y, &ec)?;
            let p = transport(x, &be, t1, t2, forward, avoid)?;
            let (b_s, b_u) = (inst(b, x, s)?, inst(b, x, u)?);
            let p = step(RuleApp::new(Rule::LForall).x(y.clone()).fa(b_s).t(ec), vec![p])?;
            step(RuleApp::new(Rule::RForall).x(y.clone()).fa(b_u).param(e), vec![p])
        }
        Formula::Iq(y, b, c) => {
            let pa = fresh_name("e", avoid);
            avoid.insert(pa.clone());
            let pd = fresh_name("e", avoid);
            avoid.insert(pd.clone());
            let (ac, dc) = (Term::Const(pa.clone()), Term::Const(pd.clone()));
            let (b_s, c_s) = (inst(b, x, s)?, inst(c, x, s)?);
            let (b_u, c_u) = (inst(b, x, u)?, inst(c, x, u)?);
            let iq_s = Formula::iq(y.clone(), b_s.clone(), c_s.clone());
            let bsa = inst(&b_s, y, &ac)?;
            let csa = inst(&c_s, y, &ac)?;
            let gamma = vec![bsa.clone(), csa.clone(), iq_s.clone(), eq.clone()];
            let target = |ante: &[Formula], succ: Formula| {
                Sequent::new(ante.to_vec(), vec![succ])
            };
            let p1 = transport(x, &inst(b, y, &ac)?, t1, t2, forward, avoid)?;
            let p1 = weaken_to(p1, &target(&gamma, inst(&b_u, y, &ac)?))?;
            let p2 = transport(x, &inst(c, y, &ac)?, t1, t2, forward, avoid)?;
            let p2 = weaken_to(p2, &target(&gamma, inst(&c_u, y, &ac)?))?;
            // uniqueness: B_u(d), Γ ⇒ d = a via LI2 on the kept copy
            let bud = inst(&b_u, y, &dc)?;
            let gamma3 = vec![bud.clone(), bsa.clone(), csa.clone(), eq.clone()];
            let q1 = transport(x, &inst(b, y, &dc)?, t1, t2, !forward, avoid)?;
            let q1 = weaken_to(q1, &target(&gamma3, inst(&b_s, y, &dc)?))?;
            let q2 = weaken_to(ProofTree::axiom(bsa.clone()), &target(&gamma3, bsa.clone()))?;
            let aa = Formula::eq(ac.clone(), ac.clone());
            let q3 = weaken_to(identity_law(&ac), &target(&gamma3, aa))?;
            let p3 = step(
                RuleApp::new(Rule::LI2)
                    .x(y.clone())
                    .fa(b_s.clone())
                    .fb(c_s.clone())
                    .fc(Formula::eq(Term::Var(y.clone()), ac.clone()))
                    .t1(dc.clone())
                    .t2(ac.clone()),
                vec![q1, q2, q3],
            )?;
            let p = step(
                RuleApp::new(Rule::RI)
                    .x(y.clone())
                    .fa(b_u)
                    .fb(c_u)
                    .t(ac)
                    .param(pd),
                vec![p1, p2, p3],
            )?;
            let p = step(
                RuleApp::new(Rule::LI1).x(y.clone()).fa(b_s).fb(c_s).param(pa),
                vec![p],
            )?;
            step(RuleApp::new(Rule::LC).fa(iq_s), vec![p])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_proof;
    use crate::syntax::{parse_formula_in, Signature};

    fn fx(text: &str) -> Formula {
        parse_formula_in(text, &mut Signature::new(), &["x".to_string()]).unwrap()
    }

    #[test]
    fn weaken_to_target() {
        let p = ProofTree::axiom(fx("F(a)"));
        let target = Sequent::new(vec![fx("G(a)"), fx("F(a)")], vec![fx("F(a)"), fx("H(b)")]);
        let q = weaken_to(p, &target).unwrap();
        assert_eq!(q.conclusion, target);
        assert!(check_proof(&q).is_ok());
    }

    #[test]
    fn leibniz_compound_formulas() {
        let (c, d) = (Term::cst("c"), Term::cst("d"));
        for text in [
            "F(x)",
            "~F(x)",
            "F(x) -> G(x, x)",
            "forall y. R(x, y)",
            "I y [R(x, y), ~y = x]",
            "I y [I z [R(y, z), z = x], forall w. (R(w, x) -> E! x)]",
        ] {
            let a = fx(text);
            for forward in [false, true] {
                let p = if forward {
                    leibniz_forward("x", &a, &c, &d).unwrap()
                } else {
                    leibniz("x", &a, &c, &d).unwrap()
                };
                assert!(check_proof(&p).is_ok(), "{text}");
                assert!(p.is_cut_free());
                let (s, u) = if forward { (&c, &d) } else { (&d, &c) };
                let expected = Sequent::new(
                    vec![Formula::eq(c.clone(), d.clone()), substitute(&a, "x", s).unwrap()],
                    vec![substitute(&a, "x", u).unwrap()],
                );
                assert_eq!(p.conclusion, expected, "{text}");
            }
        }
    }
}
