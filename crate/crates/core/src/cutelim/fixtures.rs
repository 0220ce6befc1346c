//! Proofs with cuts, built by composing corpus derivations.

use std::collections::BTreeSet;

use crate::kernel::{
    derivation_corpus, fl_analogue_for, half_ll_for, identity_law, leibniz, leibniz_mimic_1_for,
    leibniz_mimic_2_for, weaken_to, ProofTree, Rule, RuleApp, Sequent,
};
use crate::syntax::{fresh_name, substitute_const, Formula, Term};

#[derive(Clone, Debug)]
pub struct CutFixture {
    pub name: String,
    pub proof: ProofTree,
    /// Falls into the atomic-cut configuration the reduction lemmas do not cover.
    pub expect_stuck: bool,
}

fn step(app: RuleApp, premises: Vec<ProofTree>) -> ProofTree {
    ProofTree::infer(app, premises).unwrap_or_else(|e| panic!("fixture step failed: {e}"))
}

pub fn cut(l: ProofTree, r: ProofTree, a: &Formula) -> ProofTree {
    step(RuleApp::new(Rule::Cut).cut_formula(a.clone()), vec![l, r])
}

fn single_succ(p: &ProofTree) -> Formula {
    match p.conclusion.succ.as_slice() {
        [b] => b.clone(),
        _ => panic!("fixture needs exactly one succedent formula"),
    }
}

/// `Γ ⇒ B` into a cut on `¬¬B` between `Γ ⇒ ¬¬B` and `¬¬B ⇒ B`.
pub fn double_negation(p: ProofTree) -> ProofTree {
    let b = single_succ(&p);
    let nb = Formula::not(b.clone());
    let left = step(RuleApp::new(Rule::LNeg).fa(b.clone()), vec![p]);
    let left = step(RuleApp::new(Rule::RNeg).fa(nb.clone()), vec![left]);
    let right = step(RuleApp::new(Rule::RNeg).fa(b.clone()), vec![ProofTree::axiom(b)]);
    let right = step(RuleApp::new(Rule::LNeg).fa(nb.clone()), vec![right]);
    cut(left, right, &Formula::not(nb))
}

/// `A1, …, An ⇒ B` into a cut on `A1 → (… → B)` against modus ponens.
pub fn implication_detour(p: ProofTree) -> ProofTree {
    let b = single_succ(&p);
    let ante = p.conclusion.ante.clone();
    let mut left = p;
    for a in ante.iter().rev() {
        let c = single_succ(&left);
        left = step(RuleApp::new(Rule::RImp).fa(a.clone()).fb(c), vec![left]);
    }
    let mut right = ProofTree::axiom(b.clone());
    let mut c = b.clone();
    // right ⊢ C, A_i, …, A_n ⇒ B
    for (i, a) in ante.iter().enumerate().rev() {
        let rest = &ante[i..];
        let minor = weaken_to(
            ProofTree::axiom(a.clone()),
            &Sequent::new(rest.to_vec(), vec![b.clone(), a.clone()]),
        )
        .unwrap();
        let with = |f: &Formula| std::iter::once(f.clone()).chain(rest.iter().cloned()).collect();
        let major = weaken_to(right, &Sequent::new(with(&c), vec![b.clone()])).unwrap();
        right = step(RuleApp::new(Rule::LImp).fa(a.clone()).fb(c.clone()), vec![minor, major]);
        c = Formula::imp(a.clone(), c);
    }
    cut(left, right, &c)
}

/// `⇒ B(c)` into a cut on `∀z B(z)`: generalize over `c` and instantiate at `c`.
pub fn forall_detour(p: ProofTree, c: &str) -> ProofTree {
    let b = single_succ(&p);
    assert!(p.conclusion.ante.is_empty());
    let ct = Term::cst(c);
    let mut avoid = BTreeSet::new();
    b.collect_names(&mut avoid);
    let z = fresh_name("z", &avoid);
    let body = substitute_const(&b, c, &Term::var(z.clone())).unwrap();
    let left = step(RuleApp::new(Rule::LW).fa(Formula::Exists(ct.clone())), vec![p]);
    let left = step(
        RuleApp::new(Rule::RForall).x(z.clone()).fa(body.clone()).param(c),
        vec![left],
    );
    let right = step(
        RuleApp::new(Rule::LForall).x(z.clone()).fa(body.clone()).t(ct),
        vec![ProofTree::axiom(b)],
    );
    cut(left, right, &Formula::forall(z, body))
}

/// From `⇒ ∀y B(y)`, a cut giving `∃!t ⇒ B(t)`.
pub fn instantiate(p: ProofTree, t: &Term) -> ProofTree {
    let all = single_succ(&p);
    let Formula::Forall(y, body) = &all else { panic!("needs a universal") };
    let bt = crate::syntax::substitute(body, y, t).unwrap();
    let right = step(
        RuleApp::new(Rule::LForall).x(y.clone()).fa((**body).clone()).t(t.clone()),
        vec![ProofTree::axiom(bt)],
    );
    cut(p, right, &all)
}

/// Cuts `⇒ A` (after weakening to the context of `imp`) into `Γ ⇒ A → B`.
pub fn modus_ponens(imp: ProofTree, minor: ProofTree) -> ProofTree {
    let ab = single_succ(&imp);
    let Formula::Imp(a, b) = &ab else { panic!("needs an implication") };
    let (a, b) = ((**a).clone(), (**b).clone());
    let major = step(
        RuleApp::new(Rule::LImp).fa(a.clone()).fb(b.clone()),
        vec![
            weaken_to(minor, &Sequent::new(vec![], vec![b.clone(), a.clone()])).unwrap(),
            ProofTree::axiom(b),
        ],
    );
    cut(imp, major, &ab)
}

/// `⇒ ∀z z = z` cut into `∀z z = z ⇒ ∀z z = z`, both using the parameter `c`.
pub fn reused_parameter() -> ProofTree {
    let c = Term::cst("c");
    let zz = Formula::eq(Term::var("z"), Term::var("z"));
    let all = Formula::forall("z", zz.clone());
    let left = step(RuleApp::new(Rule::LW).fa(Formula::Exists(c.clone())), vec![identity_law(&c)]);
    let left = step(RuleApp::new(Rule::RForall).x("z").fa(zz.clone()).param("c"), vec![left]);
    let right = step(
        RuleApp::new(Rule::LForall).x("z").fa(zz.clone()).t(c.clone()),
        vec![ProofTree::axiom(Formula::eq(c.clone(), c))],
    );
    let right = step(RuleApp::new(Rule::RForall).x("z").fa(zz).param("c"), vec![right]);
    cut(left, right, &all)
}

fn x() -> Term {
    Term::var("x")
}

fn pred(p: &str, t: Term) -> Formula {
    Formula::pred(p, vec![t])
}

/// Fixtures whose cuts must all be eliminated. See also [`stuck_fixtures`].
pub fn cut_fixtures() -> Vec<CutFixture> {
    let corpus = derivation_corpus();
    let c = Term::cst("c");
    let fc = Term::app("f", vec![c.clone()]);
    let xc = Formula::eq(x(), c.clone());
    let xfc = Formula::eq(x(), fc.clone());
    let gx = pred("G", x());
    let fl = fl_analogue_for(&c);
    let the_c = Formula::iq("x", xc.clone(), xc.clone());
    let cc = Formula::eq(c.clone(), c.clone());
    let mut out: Vec<(String, ProofTree)> = Vec::new();

    out.push(("identity-cut".into(), cut(identity_law(&c), ProofTree::axiom(cc.clone()), &cc)));
    out.push((
        "identity-into-leibniz".into(),
        cut(identity_law(&c), leibniz("x", &pred("F", x()), &c, &c).unwrap(), &cc),
    ));
    for (name, e) in &corpus {
        out.push((format!("double-negation/{name}"), double_negation(e.proof.clone())));
        if !e.proof.conclusion.ante.is_empty() {
            out.push((format!("implication/{name}"), implication_detour(e.proof.clone())));
        }
    }
    out.push(("forall/law-of-identity".into(), forall_detour(identity_law(&c), "c")));
    out.push(("forall/FL-analogue".into(), forall_detour(fl.clone(), "c")));
    out.push(("forall/half-LL".into(), instantiate(corpus["half-LL"].proof.clone(), &c)));
    out.push((
        "description/FL-into-mimic-1".into(),
        cut(fl.clone(), leibniz_mimic_1_for(&xc, &gx, &c), &the_c),
    ));
    out.push((
        "description/FL-into-mimic-2".into(),
        cut(fl.clone(), leibniz_mimic_2_for(&xc, &gx, &c), &the_c),
    ));
    let twice = cut(fl.clone(), leibniz_mimic_2_for(&xc, &xc, &c), &the_c);
    out.push(("description/FL-into-mimic-2-twice".into(), cut(fl.clone(), twice, &the_c)));
    let m1 = cut(fl.clone(), leibniz_mimic_1_for(&xc, &xc, &c), &the_c);
    out.push(("description/FL-and-identity-into-mimic-1".into(), cut(identity_law(&c), m1, &cc)));
    out.push((
        "description/FL-of-term".into(),
        cut(
            fl_analogue_for(&fc),
            leibniz_mimic_1_for(&xfc, &gx, &fc),
            &Formula::iq("x", xfc.clone(), xfc.clone()),
        ),
    ));
    out.push((
        "description/FL-into-axiom".into(),
        cut(fl.clone(), ProofTree::axiom(the_c.clone()), &the_c),
    ));
    out.push((
        "mixed/half-LL-at-c-with-FL".into(),
        modus_ponens(instantiate(half_ll_for(&xc), &c), fl.clone()),
    ));
    let (f, g) = (pred("F", x()), pred("G", x()));
    out.push((
        "description/mimic-1-into-mimic-2".into(),
        cut(
            leibniz_mimic_1_for(&f, &g, &c),
            leibniz_mimic_2_for(&f, &g, &c),
            &Formula::iq("x", f.clone(), g.clone()),
        ),
    ));
    out.push(("forall/reused-parameter".into(), reused_parameter()));
    out.into_iter()
        .map(|(name, proof)| CutFixture {
            name,
            proof,
            expect_stuck: false,
        })
        .collect()
}

/// Cuts the lemmas cannot remove: an atom proved by `LI2` (uniqueness) that
/// the other side uses as principal formula of `=I`.
pub fn stuck_fixtures() -> Vec<CutFixture> {
    let p = |n: &str| pred(n, x());
    let c = Term::cst("c");
    let the_f_is_h = Formula::iq("x", p("F"), p("H"));
    vec![CutFixture {
        name: "stuck/mimic-1-into-mimic-3".into(),
        proof: cut(
            leibniz_mimic_1_for(&p("F"), &p("H"), &c),
            derivation_corpus()["leibniz-mimic-3"].proof.clone(),
            &the_f_is_h,
        ),
        expect_stuck: true,
    }]
}
