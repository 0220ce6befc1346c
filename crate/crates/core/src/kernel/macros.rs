use super::{weaken, MetaKey, ProofTree, Rule, RuleApp, RuleError};
use crate::syntax::Formula;

/// Replaces `LIff`/`RIff` nodes by their derivations from the `→` and `¬`
/// rules, bottom-up. Proofs without macros come back unchanged.
pub fn expand_macros(p: &ProofTree) -> ProofTree {
    let premises: Vec<ProofTree> = p.premises.iter().map(expand_macros).collect();
    if !p.app.rule.is_macro() {
        return ProofTree {
            conclusion: p.conclusion.clone(),
            app: p.app.clone(),
            premises,
        };
    }
    let expanded = match p.app.rule {
        Rule::LIff => expand_liff(&p.app, premises),
        Rule::RIff => expand_riff(&p.app, premises),
        _ => unreachable!(),
    };
    match expanded {
        // keep the original node's antecedent order
        Ok(mut q) if q.conclusion == p.conclusion => {
            q.conclusion = p.conclusion.clone();
            q
        }
        // an ill-formed macro node is left as is so the checker still rejects it
        _ => ProofTree {
            conclusion: p.conclusion.clone(),
            app: p.app.clone(),
            premises: p.premises.iter().map(expand_macros).collect(),
        },
    }
}

fn sides(app: &RuleApp) -> Result<(Formula, Formula), RuleError> {
    Ok((
        app.get_formula(MetaKey::A)?.clone(),
        app.get_formula(MetaKey::B)?.clone(),
    ))
}

// Γ ⇒ Δ,A,B  and  A,B,Γ ⇒ Δ  give  ¬((A→B)→¬(B→A)),Γ ⇒ Δ
fn expand_liff(app: &RuleApp, mut premises: Vec<ProofTree>) -> Result<ProofTree, RuleError> {
    let (a, b) = sides(app)?;
    if premises.len() != 2 {
        return Err(RuleError::ArityMismatch {
            expected: 2,
            found: premises.len(),
        });
    }
    let both = premises.pop().unwrap();
    let neither = premises.pop().unwrap();
    // context Γ ⇒ Δ read off the first premise
    let gamma = neither.conclusion.ante.clone();
    let delta = super::multiset_minus(&neither.conclusion.succ, &[a.clone(), b.clone()])
        .ok_or_else(|| RuleError::ContextMismatch("LIff premise lacks A, B".into()))?;
    let imp_ab = Formula::imp(a.clone(), b.clone());
    let imp_ba = Formula::imp(b.clone(), a.clone());

    // B→A, Γ ⇒ Δ, A
    let a_ax = weaken(
        ProofTree::axiom(a.clone()),
        &gamma,
        &delta,
    );
    let d_a = ProofTree::infer(
        RuleApp::new(Rule::LImp).fa(b.clone()).fb(a.clone()),
        vec![neither, a_ax],
    )?;
    // B, B→A, Γ ⇒ Δ
    let b_ax = weaken(ProofTree::axiom(b.clone()), &gamma, &delta);
    let d_b = ProofTree::infer(
        RuleApp::new(Rule::LImp).fa(b.clone()).fb(a.clone()),
        vec![b_ax, both],
    )?;
    let d_c = ProofTree::infer(
        RuleApp::new(Rule::LImp).fa(a.clone()).fb(b.clone()),
        vec![d_a, d_b],
    )?;
    let p = ProofTree::infer(RuleApp::new(Rule::RNeg).fa(imp_ba.clone()), vec![d_c])?;
    let p = ProofTree::infer(
        RuleApp::new(Rule::RImp).fa(imp_ab).fb(Formula::not(imp_ba.clone())),
        vec![p],
    )?;
    let body = Formula::imp(Formula::imp(a, b), Formula::not(imp_ba));
    ProofTree::infer(RuleApp::new(Rule::LNeg).fa(body), vec![p])
}

// A,Γ ⇒ Δ,B  and  B,Γ ⇒ Δ,A  give  Γ ⇒ Δ,¬((A→B)→¬(B→A))
fn expand_riff(app: &RuleApp, mut premises: Vec<ProofTree>) -> Result<ProofTree, RuleError> {
    let (a, b) = sides(app)?;
    if premises.len() != 2 {
        return Err(RuleError::ArityMismatch {
            expected: 2,
            found: premises.len(),
        });
    }
    let back = premises.pop().unwrap();
    let forth = premises.pop().unwrap();
    let imp_ab = Formula::imp(a.clone(), b.clone());
    let imp_ba = Formula::imp(b.clone(), a.clone());
    let p_ab = ProofTree::infer(RuleApp::new(Rule::RImp).fa(a.clone()).fb(b.clone()), vec![forth])?;
    let p_ba = ProofTree::infer(RuleApp::new(Rule::RImp).fa(b.clone()).fb(a.clone()), vec![back])?;
    let p_ba = ProofTree::infer(RuleApp::new(Rule::LNeg).fa(imp_ba.clone()), vec![p_ba])?;
    let p = ProofTree::infer(
        RuleApp::new(Rule::LImp).fa(imp_ab.clone()).fb(Formula::not(imp_ba.clone())),
        vec![p_ab, p_ba],
    )?;
    ProofTree::infer(
        RuleApp::new(Rule::RNeg).fa(Formula::imp(imp_ab, Formula::not(imp_ba))),
        vec![p],
    )
}
