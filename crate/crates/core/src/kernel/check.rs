use thiserror::Error;

use super::{
    multiset_minus, same_multiset, MetaKey, MetaVal, ProofTree, Rule, RuleApp, RuleError, Sequent,
    SideCondition,
};
use crate::syntax::{substitute, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {path:?}: {error}")]
pub struct ProofError {
    /// child indices from the root to the offending node
    pub path: Vec<usize>,
    pub error: RuleError,
}

/// Principal formulas of the conclusion and side formulas added to each
/// premise; contexts are shared between premises.
struct Shape {
    concl_ante: Vec<Formula>,
    concl_succ: Vec<Formula>,
    prem: Vec<(Vec<Formula>, Vec<Formula>)>,
}

fn validate_meta(app: &RuleApp) -> Result<(), RuleError> {
    let keys = app.rule.meta_keys();
    for k in keys {
        let ok = match (k, app.meta.get(k)) {
            (_, None) => return Err(RuleError::MetaMissing(k.name())),
            (MetaKey::X | MetaKey::Param, Some(v)) => matches!(v, MetaVal::Name(_)),
            (MetaKey::T | MetaKey::T1 | MetaKey::T2, Some(v)) => matches!(v, MetaVal::Term(_)),
            (_, Some(v)) => matches!(v, MetaVal::Formula(_)),
        };
        if !ok {
            return Err(RuleError::MetaKind(k.name()));
        }
    }
    if let Some(extra) = app.meta.keys().find(|k| !keys.contains(k)) {
        return Err(RuleError::MetaUnexpected(extra.name()));
    }
    Ok(())
}

fn inst(a: &Formula, x: &str, t: &Term) -> Result<Formula, RuleError> {
    substitute(a, x, t).map_err(|_| RuleError::SideConditionViolated(SideCondition::Substitutability))
}

fn shape(app: &RuleApp) -> Result<Shape, RuleError> {
    use MetaKey::*;
    let f = |k| app.get_formula(k).cloned();
    let s = |ante: Vec<Formula>, succ: Vec<Formula>| (ante, succ);
    Ok(match app.rule {
        Rule::Ax | Rule::Cut => unreachable!("handled separately"),
        Rule::LW => Shape {
            concl_ante: vec![f(A)?],
            concl_succ: vec![],
            prem: vec![s(vec![], vec![])],
        },
        Rule::RW => Shape {
            concl_ante: vec![],
            concl_succ: vec![f(A)?],
            prem: vec![s(vec![], vec![])],
        },
        Rule::LC => Shape {
            concl_ante: vec![f(A)?],
            concl_succ: vec![],
            prem: vec![s(vec![f(A)?, f(A)?], vec![])],
        },
        Rule::RC => Shape {
            concl_ante: vec![],
            concl_succ: vec![f(A)?],
            prem: vec![s(vec![], vec![f(A)?, f(A)?])],
        },
        Rule::LNeg => Shape {
            concl_ante: vec![Formula::not(f(A)?)],
            concl_succ: vec![],
            prem: vec![s(vec![], vec![f(A)?])],
        },
        Rule::RNeg => Shape {
            concl_ante: vec![],
            concl_succ: vec![Formula::not(f(A)?)],
            prem: vec![s(vec![f(A)?], vec![])],
        },
        Rule::LImp => Shape {
            concl_ante: vec![Formula::imp(f(A)?, f(B)?)],
            concl_succ: vec![],
            prem: vec![s(vec![], vec![f(A)?]), s(vec![f(B)?], vec![])],
        },
        Rule::RImp => Shape {
            concl_ante: vec![],
            concl_succ: vec![Formula::imp(f(A)?, f(B)?)],
            prem: vec![s(vec![f(A)?], vec![f(B)?])],
        },
        Rule::LForall => {
            let x = app.get_name(X)?;
            let t = app.get_term(T)?;
            let a = f(A)?;
            Shape {
                concl_ante: vec![Formula::Exists(t.clone()), Formula::forall(x, a.clone())],
                concl_succ: vec![],
                prem: vec![s(vec![inst(&a, x, t)?], vec![])],
            }
        }
        Rule::RForall => {
            let x = app.get_name(X)?;
            let p = Term::Const(app.get_name(Param)?.to_string());
            let a = f(A)?;
            Shape {
                concl_ante: vec![],
                concl_succ: vec![Formula::forall(x, a.clone())],
                prem: vec![s(vec![Formula::Exists(p.clone())], vec![inst(&a, x, &p)?])],
            }
        }
        Rule::EqI => {
            let x = app.get_name(X)?;
            let (t1, t2) = (app.get_term(T1)?, app.get_term(T2)?);
            let a = f(A)?;
            Shape {
                concl_ante: vec![Formula::eq(t1.clone(), t2.clone()), inst(&a, x, t1)?],
                concl_succ: vec![],
                prem: vec![s(vec![inst(&a, x, t2)?], vec![])],
            }
        }
        Rule::EqE => {
            let t = app.get_term(T)?;
            Shape {
                concl_ante: vec![],
                concl_succ: vec![],
                prem: vec![s(vec![Formula::eq(t.clone(), t.clone())], vec![])],
            }
        }
        Rule::RI => {
            let x = app.get_name(X)?;
            let t = app.get_term(T)?;
            let p = Term::Const(app.get_name(Param)?.to_string());
            let (a, b) = (f(A)?, f(B)?);
            Shape {
                concl_ante: vec![],
                concl_succ: vec![Formula::iq(x, a.clone(), b.clone())],
                prem: vec![
                    s(vec![], vec![inst(&a, x, t)?]),
                    s(vec![], vec![inst(&b, x, t)?]),
                    s(vec![inst(&a, x, &p)?], vec![Formula::eq(p.clone(), t.clone())]),
                ],
            }
        }
        Rule::LI1 => {
            let x = app.get_name(X)?;
            let p = Term::Const(app.get_name(Param)?.to_string());
            let (a, b) = (f(A)?, f(B)?);
            Shape {
                concl_ante: vec![Formula::iq(x, a.clone(), b.clone())],
                concl_succ: vec![],
                prem: vec![s(vec![inst(&a, x, &p)?, inst(&b, x, &p)?], vec![])],
            }
        }
        Rule::LI2 => {
            let x = app.get_name(X)?;
            let (t1, t2) = (app.get_term(T1)?, app.get_term(T2)?);
            let (a, b, c) = (f(A)?, f(B)?, f(C)?);
            Shape {
                concl_ante: vec![Formula::iq(x, a.clone(), b)],
                concl_succ: vec![inst(&c, x, t1)?],
                prem: vec![
                    s(vec![], vec![inst(&a, x, t1)?]),
                    s(vec![], vec![inst(&a, x, t2)?]),
                    s(vec![], vec![inst(&c, x, t2)?]),
                ],
            }
        }
        Rule::LIff => {
            let (a, b) = (f(A)?, f(B)?);
            Shape {
                concl_ante: vec![Formula::iff(a.clone(), b.clone())],
                concl_succ: vec![],
                prem: vec![s(vec![], vec![a.clone(), b.clone()]), s(vec![a, b], vec![])],
            }
        }
        Rule::RIff => {
            let (a, b) = (f(A)?, f(B)?);
            Shape {
                concl_ante: vec![],
                concl_succ: vec![Formula::iff(a.clone(), b.clone())],
                prem: vec![s(vec![a.clone()], vec![b.clone()]), s(vec![b], vec![a])],
            }
        }
    })
}

/// Principal formulas of the conclusion (antecedent, succedent).
pub(crate) fn principal_formulas(app: &RuleApp) -> Result<(Vec<Formula>, Vec<Formula>), RuleError> {
    validate_meta(app)?;
    match app.rule {
        Rule::Ax => {
            let a = app.get_formula(MetaKey::A)?;
            Ok((vec![a.clone()], vec![a.clone()]))
        }
        Rule::Cut => Ok((vec![], vec![])),
        _ => {
            let sh = shape(app)?;
            Ok((sh.concl_ante, sh.concl_succ))
        }
    }
}

fn check_arity(app: &RuleApp, found: usize) -> Result<(), RuleError> {
    let expected = app.rule.arity();
    if expected == found {
        Ok(())
    } else {
        Err(RuleError::ArityMismatch { expected, found })
    }
}

fn mismatch(msg: impl Into<String>) -> RuleError {
    RuleError::ContextMismatch(msg.into())
}

/// Verifies one inference: schema instance, exact multiset contexts and side
/// conditions.
pub fn check_rule(app: &RuleApp, premises: &[&Sequent], conclusion: &Sequent) -> Result<(), RuleError> {
    validate_meta(app)?;
    check_arity(app, premises.len())?;
    match app.rule {
        Rule::Ax => {
            let a = app.get_formula(MetaKey::A)?;
            let expected = Sequent::new(vec![a.clone()], vec![a.clone()]);
            if *conclusion != expected {
                return Err(mismatch("axiom must be A |- A"));
            }
            Ok(())
        }
        Rule::Cut => {
            let expected = cut_conclusion(app, premises)?;
            if *conclusion != expected {
                return Err(mismatch("cut conclusion is not the union of the premise contexts"));
            }
            Ok(())
        }
        _ => {
            let sh = shape(app)?;
            let gamma = multiset_minus(&conclusion.ante, &sh.concl_ante)
                .ok_or_else(|| mismatch("principal formula missing from the antecedent"))?;
            let delta = multiset_minus(&conclusion.succ, &sh.concl_succ)
                .ok_or_else(|| mismatch("principal formula missing from the succedent"))?;
            for (i, ((pa, ps), prem)) in sh.prem.iter().zip(premises).enumerate() {
                let ante: Vec<Formula> = pa.iter().chain(&gamma).cloned().collect();
                let succ: Vec<Formula> = delta.iter().chain(ps).cloned().collect();
                if !same_multiset(&ante, &prem.ante) || !same_multiset(&succ, &prem.succ) {
                    return Err(mismatch(format!("premise {i} does not match the schema")));
                }
            }
            if let Some(a) = app.eigen() {
                // in RI the witness term must not mention the parameter either
                let in_witness = app.rule == Rule::RI && app.get_term(MetaKey::T)?.occurs(a);
                if conclusion.occurs(a) || in_witness {
                    return Err(RuleError::SideConditionViolated(SideCondition::Eigenvariable));
                }
            }
            let atomic_key = match app.rule {
                Rule::EqI => Some(MetaKey::A),
                Rule::LI2 => Some(MetaKey::C),
                _ => None,
            };
            if let Some(k) = atomic_key {
                if !app.get_formula(k)?.is_atomic() {
                    return Err(RuleError::SideConditionViolated(SideCondition::Atomicity));
                }
            }
            Ok(())
        }
    }
}

fn cut_conclusion(app: &RuleApp, premises: &[&Sequent]) -> Result<Sequent, RuleError> {
    let a = app.get_formula(MetaKey::CutFormula)?;
    let (left, right) = (premises[0], premises[1]);
    let theta = multiset_minus(&left.succ, std::slice::from_ref(a))
        .ok_or_else(|| mismatch("cut formula missing from the left premise's succedent"))?;
    let delta = multiset_minus(&right.ante, std::slice::from_ref(a))
        .ok_or_else(|| mismatch("cut formula missing from the right premise's antecedent"))?;
    Ok(Sequent::new(
        left.ante.iter().chain(&delta).cloned().collect(),
        theta.into_iter().chain(right.succ.iter().cloned()).collect(),
    ))
}

/// The conclusion the schema produces from `premises`, with the context read
/// off the first premise.
pub(super) fn conclusion_for(app: &RuleApp, premises: &[&Sequent]) -> Result<Sequent, RuleError> {
    validate_meta(app)?;
    check_arity(app, premises.len())?;
    match app.rule {
        Rule::Ax => {
            let a = app.get_formula(MetaKey::A)?;
            Ok(Sequent::new(vec![a.clone()], vec![a.clone()]))
        }
        Rule::Cut => cut_conclusion(app, premises),
        _ => {
            let sh = shape(app)?;
            let (pa, ps) = &sh.prem[0];
            let gamma = multiset_minus(&premises[0].ante, pa)
                .ok_or_else(|| mismatch("premise 0 lacks the rule's side formulas"))?;
            let delta = multiset_minus(&premises[0].succ, ps)
                .ok_or_else(|| mismatch("premise 0 lacks the rule's side formulas"))?;
            Ok(Sequent::new(
                sh.concl_ante.into_iter().chain(gamma).collect(),
                delta.into_iter().chain(sh.concl_succ).collect(),
            ))
        }
    }
}

/// Checks every node; reports the first failing node in pre-order.
pub fn check_proof(p: &ProofTree) -> Result<(), ProofError> {
    fn go(p: &ProofTree, path: &mut Vec<usize>) -> Result<(), ProofError> {
        let prem: Vec<&Sequent> = p.premises.iter().map(|q| &q.conclusion).collect();
        check_rule(&p.app, &prem, &p.conclusion).map_err(|error| ProofError {
            path: path.clone(),
            error,
        })?;
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            go(q, path)?;
            path.pop();
        }
        Ok(())
    }
    go(p, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_in, parse_sequent_parts, Signature};

    fn seq(text: &str) -> Sequent {
        let mut sig = Signature::new();
        let (a, s) = parse_sequent_parts(text, &mut sig).unwrap();
        Sequent::new(a, s)
    }

    fn fx(text: &str) -> Formula {
        parse_formula_in(text, &mut Signature::new(), &["x".to_string()]).unwrap()
    }

    fn c(n: &str) -> Term {
        Term::cst(n)
    }

    #[test]
    fn axiom_ok() {
        let app = RuleApp::new(Rule::Ax).fa(fx("F(a)"));
        assert!(check_rule(&app, &[], &seq("F(a) |- F(a)")).is_ok());
        assert!(check_rule(&app, &[], &seq("F(a), G(a) |- F(a)")).is_err());
    }

    #[test]
    fn rforall_eigen_violation() {
        let app = RuleApp::new(Rule::RForall).x("x").fa(fx("F(x)")).param("a");
        let prem = seq("E! a, F(a) |- F(a)");
        let concl = seq("F(a) |- forall x. F(x)");
        assert_eq!(
            check_rule(&app, &[&prem], &concl),
            Err(RuleError::SideConditionViolated(SideCondition::Eigenvariable))
        );
    }

    #[test]
    fn ri_fl_instance() {
        let app = RuleApp::new(Rule::RI)
            .x("x")
            .fa(fx("x = t"))
            .fb(fx("x = t"))
            .t(c("t"))
            .param("a");
        let p1 = seq("|- t = t");
        let p3 = seq("a = t |- a = t");
        assert!(check_rule(&app, &[&p1, &p1, &p3], &seq("|- I x [x = t, x = t]")).is_ok());
    }

    #[test]
    fn li2_requires_atomic_c() {
        let app = RuleApp::new(Rule::LI2)
            .x("x")
            .fa(fx("F(x)"))
            .fb(fx("G(x)"))
            .fc(fx("~G(x)"))
            .t1(c("a"))
            .t2(c("b"));
        let p1 = seq("|- F(a)");
        let p2 = seq("|- F(b)");
        let p3 = seq("|- ~G(b)");
        let concl = seq("I x [F(x), G(x)] |- ~G(a)");
        assert_eq!(
            check_rule(&app, &[&p1, &p2, &p3], &concl),
            Err(RuleError::SideConditionViolated(SideCondition::Atomicity))
        );
    }

    #[test]
    fn meta_must_be_exact() {
        let app = RuleApp::new(Rule::LW).fa(fx("F(a)")).t(c("a"));
        assert_eq!(
            check_rule(&app, &[&seq("|-")], &seq("F(a) |-")),
            Err(RuleError::MetaUnexpected("t"))
        );
        let app = RuleApp::new(Rule::LImp).fa(fx("F(a)"));
        assert_eq!(
            check_rule(&app, &[&seq("|-"), &seq("|-")], &seq("F(a) |-")),
            Err(RuleError::MetaMissing("B"))
        );
    }

    #[test]
    fn arity_and_context() {
        let app = RuleApp::new(Rule::LW).fa(fx("F(a)"));
        assert_eq!(
            check_rule(&app, &[], &seq("F(a) |-")),
            Err(RuleError::ArityMismatch {
                expected: 1,
                found: 0
            })
        );
        // multiplicity matters
        assert!(matches!(
            check_rule(&app, &[&seq("G(a) |-")], &seq("F(a), G(a), G(a) |-")),
            Err(RuleError::ContextMismatch(_))
        ));
    }

    #[test]
    fn lforall_substitutability() {
        // t = y is never produced by the parser, built by hand
        let app = RuleApp::new(Rule::LForall)
            .x("x")
            .fa(Formula::forall("y", Formula::eq(Term::var("x"), Term::var("y"))))
            .t(Term::var("y"));
        let r = conclusion_for(&app, &[&Sequent::default()]);
        assert_eq!(r, Err(RuleError::SideConditionViolated(SideCondition::Substitutability)));
    }
}
