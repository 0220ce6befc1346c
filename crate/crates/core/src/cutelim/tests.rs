use proptest::prelude::*;

use super::fixtures::*;
use super::reduce::Reducer;
use super::*;
use crate::kernel::{
    check_proof, derivation_corpus, fl_analogue_for, identity_law, leibniz_mimic_1_for,
    leibniz_mimic_2_for, weaken, RuleApp,
};
use crate::syntax::{parse_formula_in, parse_sequent_parts, Signature};

fn f(text: &str) -> Formula {
    parse_formula_in(text, &mut Signature::new(), &["x".to_string()]).unwrap()
}

fn seq(text: &str) -> Sequent {
    let (a, s) = parse_sequent_parts(text, &mut Signature::new()).unwrap();
    Sequent::new(a, s)
}

fn infer(app: RuleApp, premises: Vec<ProofTree>) -> ProofTree {
    ProofTree::infer(app, premises).unwrap()
}

fn c() -> Term {
    Term::cst("c")
}

fn the_c() -> Formula {
    f("I x [x = c, x = c]")
}

/// Output checks, has the given conclusion and only cuts below `d`.
fn assert_reduced(p: &ProofTree, concl: &Sequent, d: usize) {
    assert_eq!(check_proof(p), Ok(()));
    assert_eq!(p.conclusion, *concl);
    assert!(cuts_below(p, d), "cut of degree {} left", proof_degree(p));
}

#[test]
fn degrees() {
    assert_eq!(degree(&f("P(a)")), 0);
    assert_eq!(degree(&f("P(a) -> Q(a)")), 1);
    assert_eq!(degree(&f("I x [F(x), G(x)]")), 1);
    assert_eq!(degree(&f("~~(F(a) -> G(a))")), 3);
    // ∧ is ¬(A → ¬B)
    assert_eq!(degree(&f("F(a) & G(a)")), 3);
    assert_eq!(degree(&f("forall x. I y [F(y), x = y]")), 2);
}

#[test]
fn proof_degrees() {
    assert_eq!(proof_degree(&identity_law(&c())), 0);
    let pq = f("P(a) -> Q(a)");
    let p = cut(ProofTree::axiom(pq.clone()), ProofTree::axiom(pq.clone()), &pq);
    assert_eq!(proof_degree(&p), 1);
    let p = cut(
        fl_analogue_for(&c()),
        leibniz_mimic_1_for(&f("x = c"), &f("G(x)"), &c()),
        &the_c(),
    );
    assert_eq!(proof_degree(&p), degree(&the_c()));
}

#[test]
fn substitution_renames_parameters() {
    let p = ProofTree::axiom(f("F(a)"));
    let q = substitute_in_proof(&p, "a", &Term::cst("b")).unwrap();
    assert_eq!(q.conclusion, seq("F(b) |- F(b)"));
    assert_eq!(substitute_in_proof(&p, "a", &Term::cst("a")).unwrap(), p);

    // the eigen-parameter of half-LL's outer R∀, renamed inside its premise
    let hl = derivation_corpus()["half-LL"].proof.clone();
    let e = hl.app.eigen().unwrap().to_string();
    let prem = substitute_in_proof(&hl.premises[0], &e, &Term::cst("c1")).unwrap();
    assert!(!prem.conclusion.occurs(&e));
    assert_eq!(check_proof(&prem), Ok(()));
    assert_eq!(prem.height(), hl.premises[0].height());
    let mut app = hl.app.clone();
    app.meta.insert(MetaKey::Param, MetaVal::Name("c1".into()));
    let renamed = ProofTree::infer(app, vec![prem]).unwrap();
    assert_eq!(renamed.conclusion, hl.conclusion);
}

#[test]
fn substitution_reports_eigen_clash() {
    // F(a) ⇒ ∀x x = x by R∀ with parameter e; a ↦ e would capture
    let e = Term::cst("e");
    let p = weaken(identity_law(&e), &[Formula::Exists(e.clone()), f("F(a)")], &[]);
    let p = infer(RuleApp::new(Rule::RForall).x("x").fa(f("x = x")).param("e"), vec![p]);
    assert!(matches!(
        substitute_in_proof(&p, "a", &e),
        Err(CutElimError::EigenClash { .. })
    ));
    let mut avoid = p.names();
    let q = regularize_with(&p, &mut avoid);
    let q = substitute_in_proof(&q, "a", &e).unwrap();
    assert_eq!(q.conclusion, seq("F(e) |- forall x. x = x"));
    assert_eq!(check_proof(&q), Ok(()));
}

#[test]
fn regularize_separates_parameters() {
    let p = reused_parameter();
    let eigen: Vec<String> = p.nodes().iter().filter_map(|n| n.app.eigen()).map(String::from).collect();
    assert_eq!(eigen, ["c", "c"]);
    let q = regularize(&p);
    assert_eq!(check_proof(&q), Ok(()));
    assert_eq!(q.conclusion, p.conclusion);
    let mut seen = BTreeSet::new();
    for n in q.nodes() {
        if let Some(a) = n.app.eigen() {
            assert!(seen.insert(a.to_string()));
            // absent outside the subproof it closes
            let outside = q.nodes().into_iter().filter(|m| !n.nodes().iter().any(|k| std::ptr::eq(*k, *m)));
            for m in outside {
                assert!(!m.conclusion.occurs(a), "{a} escapes");
            }
        }
    }
    for (name, e) in derivation_corpus() {
        let q = regularize(&e.proof);
        assert_eq!(check_proof(&q), Ok(()), "{name}");
        assert_eq!(q.conclusion, e.proof.conclusion, "{name}");
    }
}

#[test]
fn right_reduce_axiom_returns_left() {
    let fl = fl_analogue_for(&c());
    let out = right_reduce(&fl, &ProofTree::axiom(the_c()), &the_c(), 1).unwrap();
    assert_eq!(out, fl);
}

/// The subproof ending in the first rule of the given kind, in pre-order.
fn first(p: &ProofTree, rule: Rule) -> ProofTree {
    (*p.nodes().into_iter().find(|n| n.app.rule == rule).unwrap()).clone()
}

#[test]
fn right_reduce_li1_case() {
    let a = the_c();
    let d1 = fl_analogue_for(&c());
    // Ix, Ix, G(c) ⇒ Ix[x = c, G]
    let d2 = first(&leibniz_mimic_1_for(&f("x = c"), &f("G(x)"), &c()), Rule::LI1);
    assert_eq!(d2.app.get_formula(MetaKey::A).unwrap(), &f("x = c"));
    let mut r = Reducer::new(d1.names().union(&d2.names()).cloned().collect());
    let out = r.rr(&d1, &d2, &a, 2).unwrap();
    assert_reduced(&out, &seq("G(c) |- I x [x = c, G(x)]"), 1);
    assert!(r.trace.iter().any(|s| s.case == "R:LI1"));
}

#[test]
fn right_reduce_li2_case() {
    let a = the_c();
    let d1 = fl_analogue_for(&c());
    let d2 = first(&leibniz_mimic_2_for(&f("x = c"), &f("x = c"), &c()), Rule::LI2);
    let mut r = Reducer::new(d1.names().union(&d2.names()).cloned().collect());
    let out = r.rr(&d1, &d2, &a, 1).unwrap();
    let mut expected = d2.conclusion.clone();
    expected.ante.retain(|g| *g != a);
    assert_reduced(&out, &expected, 1);
    assert!(r.trace.iter().any(|s| s.case == "R:LI2"));
    // the public entry point agrees up to parameter names
    let out = right_reduce(&d1, &d2, &a, 1).unwrap();
    assert_reduced(&out, &expected, 1);
}

#[test]
fn left_reduce_cases() {
    let a = the_c();
    let d2 = leibniz_mimic_1_for(&f("x = c"), &f("G(x)"), &c());
    // axiom on the left gives the right proof back
    assert_eq!(left_reduce(&ProofTree::axiom(a.clone()), &d2, &a, 1).unwrap(), d2);

    // RI with the description twice in the succedent
    let fl = fl_analogue_for(&c());
    let prem: Vec<ProofTree> = fl.premises.iter().map(|p| weaken(p.clone(), &[], std::slice::from_ref(&a))).collect();
    let d1 = infer(fl.app.clone(), prem);
    assert_eq!(d1.conclusion, seq("|- I x [x = c, x = c], I x [x = c, x = c]"));
    let mut r = Reducer::new(d1.names().union(&d2.names()).cloned().collect());
    let out = r.lr(&d1, &d2, &a, 2).unwrap();
    assert_reduced(&out, &seq("G(c), G(c) |- I x [x = c, G(x)], I x [x = c, G(x)]"), 1);
    assert!(r.trace.iter().any(|s| s.case == "L:intro"));

    // parametric: the last rule is L¬
    let p = weaken(fl.clone(), &[], &[f("P(c)")]);
    let d1 = infer(RuleApp::new(Rule::LNeg).fa(f("P(c)")), vec![p]);
    let mut r = Reducer::new(d1.names().union(&d2.names()).cloned().collect());
    let out = r.lr(&d1, &d2, &a, 1).unwrap();
    assert_reduced(&out, &seq("~P(c), G(c) |- I x [x = c, G(x)]"), 1);
    // steps are logged bottom-up, the root case last
    assert_eq!(r.trace.last().map(|s| s.case), Some("L:param"));
}

#[test]
fn preconditions() {
    let a = the_c();
    let d2 = ProofTree::axiom(a.clone());
    // last rule R-weakening does not introduce A
    let d1 = weaken(identity_law(&c()), &[], std::slice::from_ref(&a));
    assert!(matches!(
        right_reduce(&d1, &d2, &a, 1),
        Err(CutElimError::PreconditionViolated(_))
    ));
    // a cut of degree d(A) inside a premise
    let with_cut = cut(fl_analogue_for(&c()), ProofTree::axiom(a.clone()), &a);
    assert!(matches!(
        left_reduce(&with_cut, &d2, &a, 1),
        Err(CutElimError::PreconditionViolated(_))
    ));
    assert!(matches!(
        left_reduce(&fl_analogue_for(&c()), &d2, &a, 2),
        Err(CutElimError::PreconditionViolated(_))
    ));
}

#[test]
fn eliminate_examples() {
    let p = derivation_corpus()["half-LL"].proof.clone();
    assert_eq!(eliminate_cuts(&p).unwrap(), p);

    let cc = f("c = c");
    let p = cut(identity_law(&c()), ProofTree::axiom(cc.clone()), &cc);
    let q = eliminate_cuts(&p).unwrap();
    assert!(q.is_cut_free());
    assert_eq!(q.conclusion, seq("|- c = c"));

    let p = cut(
        fl_analogue_for(&c()),
        leibniz_mimic_1_for(&f("x = c"), &f("G(x)"), &c()),
        &the_c(),
    );
    let (q, trace) = eliminate_cuts_traced(&p).unwrap();
    assert!(q.is_cut_free());
    assert_eq!(check_proof(&q), Ok(()));
    assert_eq!(q.conclusion, seq("G(c) |- I x [x = c, G(x)]"));
    assert_eq!(trace[0].case, "cut");
    assert_eq!(trace[0].degree, 1);
}

#[test]
fn all_fixtures_eliminate() {
    let fixtures = cut_fixtures();
    assert!(fixtures.len() >= 20);
    for fx in fixtures {
        assert_eq!(check_proof(&fx.proof), Ok(()), "{}", fx.name);
        assert!(!fx.proof.is_cut_free(), "{}", fx.name);
        let q = eliminate_cuts(&fx.proof).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        assert_eq!(check_proof(&q), Ok(()), "{}", fx.name);
        assert!(q.is_cut_free(), "{}", fx.name);
        assert_eq!(q.conclusion, fx.proof.conclusion, "{}", fx.name);
    }
}

#[test]
fn stuck_fixtures_report_the_atomic_cut() {
    for fx in stuck_fixtures() {
        assert!(fx.expect_stuck);
        assert!(matches!(
            eliminate_cuts(&fx.proof),
            Err(CutElimError::StuckAtomicCut { left: Rule::LI2, right: Rule::EqI, .. })
        ));
    }
}

#[test]
fn rejects_unchecked_input() {
    let mut p = identity_law(&c());
    p.conclusion = seq("|- d = d");
    assert!(matches!(eliminate_cuts(&p), Err(CutElimError::Invalid(_))));
}

#[derive(Clone, Debug)]
enum Wrap {
    DoubleNegation,
    Implication,
    Forall,
}

fn bases() -> Vec<ProofTree> {
    let mut v: Vec<ProofTree> = derivation_corpus().into_values().map(|e| e.proof).collect();
    v.push(cut(
        fl_analogue_for(&c()),
        leibniz_mimic_2_for(&f("x = c"), &f("G(x)"), &c()),
        &the_c(),
    ));
    v
}

fn wrap(p: ProofTree, w: &Wrap) -> ProofTree {
    match w {
        Wrap::DoubleNegation => double_negation(p),
        Wrap::Implication => implication_detour(p),
        Wrap::Forall if p.conclusion.ante.is_empty() && !p.nodes().iter().any(|n| n.app.eigen() == Some("c")) => {
            forall_detour(p, "c")
        }
        Wrap::Forall => double_negation(p),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composed_cuts_eliminate(
        base in 0usize..8,
        wraps in prop::collection::vec(
            prop_oneof![Just(Wrap::DoubleNegation), Just(Wrap::Implication), Just(Wrap::Forall)],
            1..3,
        ),
    ) {
        let p = wraps.iter().fold(bases()[base].clone(), wrap);
        prop_assert_eq!(check_proof(&p), Ok(()));
        let q = eliminate_cuts(&p).unwrap();
        prop_assert_eq!(check_proof(&q), Ok(()));
        prop_assert!(q.is_cut_free());
        prop_assert_eq!(&q.conclusion, &p.conclusion);
    }

    #[test]
    fn substitution_preserves_height(base in 0usize..7, target in "[a-e]") {
        let p = bases()[base].clone();
        for name in p.names() {
            if let Ok(q) = substitute_in_proof(&p, &name, &Term::cst(target.clone())) {
                prop_assert_eq!(q.height(), p.height());
            }
        }
    }
}
