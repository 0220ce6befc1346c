//! Golden derivations: identity, Leibniz' Law, the three Leibniz mimics for
//! descriptions, one half of the analogue of Lambert's Law and the analogue
//! of FL.
//!
//! Schematic letters are instantiated with unary predicates `F`, `G`, `H`
//! and the constant `c` standing for the term `t`.

use std::collections::{BTreeMap, BTreeSet};

use super::{identity_law, leibniz, leibniz_forward, weaken_to, ProofTree, Rule, RuleApp, Sequent};
use crate::syntax::{fresh_name, substitute, Formula, Term};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub proof: ProofTree,
}

fn var(x: &str) -> Term {
    Term::var(x)
}

fn cst(c: &str) -> Term {
    Term::cst(c)
}

fn p1(p: &str, t: Term) -> Formula {
    Formula::pred(p, vec![t])
}

fn eq(l: Term, r: Term) -> Formula {
    Formula::eq(l, r)
}

fn rule(app: RuleApp, premises: Vec<ProofTree>) -> ProofTree {
    ProofTree::infer(app, premises).unwrap_or_else(|e| panic!("corpus step failed: {e}"))
}

fn to(p: ProofTree, ante: Vec<Formula>, succ: Vec<Formula>) -> ProofTree {
    weaken_to(p, &Sequent::new(ante, succ)).unwrap_or_else(|e| panic!("corpus weakening: {e}"))
}

/// `t1 = t2, F(t1) ⇒ F(t2)` by one `=I` step.
fn eq_step(pred: &str, t1: Term, t2: Term) -> ProofTree {
    rule(
        RuleApp::new(Rule::EqI)
            .x("x")
            .fa(p1(pred, var("x")))
            .t1(t1)
            .t2(t2.clone()),
        vec![ProofTree::axiom(p1(pred, t2))],
    )
}

/// `⇒ c = c`
pub fn law_of_identity() -> ProofTree {
    identity_law(&cst("c"))
}

/// `c = d, F(d) ⇒ F(c)`
pub fn leibniz_law() -> ProofTree {
    leibniz("x", &p1("F", var("x")), &cst("c"), &cst("d")).expect("atomic Leibniz")
}

/// `⇒ Ix[x = c, x = c]`
pub fn fl_analogue() -> ProofTree {
    fl_analogue_for(&cst("c"))
}

/// Distinct parameters named after `bases`, fresh for the given formulas and term.
fn params<const N: usize>(bases: [&str; N], fs: &[&Formula], t: &Term) -> [Term; N] {
    let mut avoid = BTreeSet::new();
    for f in fs {
        f.collect_names(&mut avoid);
    }
    t.collect_names(&mut avoid);
    bases.map(|b| {
        let n = if avoid.contains(b) { fresh_name(b, &avoid) } else { b.to_string() };
        avoid.insert(n.clone());
        Term::Const(n)
    })
}

fn at(f: &Formula, t: &Term) -> Formula {
    substitute(f, "x", t).unwrap_or_else(|e| panic!("corpus instance: {e}"))
}

fn forward(f: &Formula, t1: &Term, t2: &Term) -> ProofTree {
    leibniz_forward("x", f, t1, t2).unwrap_or_else(|e| panic!("corpus Leibniz step: {e}"))
}

/// `⇒ Ix[x = t, x = t]` for a ground term `t`.
pub fn fl_analogue_for(t: &Term) -> ProofTree {
    let xt = eq(var("x"), t.clone());
    let [a] = params(["a"], &[], t);
    rule(
        RuleApp::new(Rule::RI)
            .x("x")
            .fa(xt.clone())
            .fb(xt)
            .t(t.clone())
            .param(name(&a)),
        vec![identity_law(t), identity_law(t), ProofTree::axiom(eq(a, t.clone()))],
    )
}

fn name(t: &Term) -> String {
    match t {
        Term::Const(c) => c.clone(),
        _ => unreachable!("parameters are constants"),
    }
}

/// `Ix[F, x = c], G(c) ⇒ Ix[F, G]`, following the displayed derivation with
/// the structural steps made explicit.
pub fn leibniz_mimic_1() -> ProofTree {
    leibniz_mimic_1_for(&p1("F", var("x")), &p1("G", var("x")), &cst("c"))
}

/// `Ix[F, x = t], G(t) ⇒ Ix[F, G]` for formulas `f`, `g` in `x` and ground `t`.
pub fn leibniz_mimic_1_for(f: &Formula, g: &Formula, t: &Term) -> ProofTree {
    let [a, b, e] = params(["a", "b", "e"], &[f, g], t);
    let xt = eq(var("x"), t.clone());
    let the_f_is_t = Formula::iq("x", f.clone(), xt.clone());

    // Π: Ix[F, x=t], F(b) ⇒ b = t
    let ctx = vec![at(f, &b), eq(e.clone(), t.clone()), at(f, &e)];
    let pi = rule(
        RuleApp::new(Rule::LI2)
            .x("x")
            .fa(f.clone())
            .fb(xt.clone())
            .fc(xt.clone())
            .t1(b.clone())
            .t2(t.clone()),
        vec![
            to(ProofTree::axiom(at(f, &b)), ctx.clone(), vec![at(f, &b)]),
            to(forward(f, &e, t), ctx.clone(), vec![at(f, t)]),
            to(identity_law(t), ctx, vec![eq(t.clone(), t.clone())]),
        ],
    );
    let pi = rule(
        RuleApp::new(Rule::LI1).x("x").fa(f.clone()).fb(xt.clone()).param(name(&e)),
        vec![pi],
    );
    let pi = rule(RuleApp::new(Rule::LC).fa(the_f_is_t.clone()), vec![pi]);

    let ctx = vec![
        eq(a.clone(), t.clone()),
        at(f, &a),
        at(g, t),
        the_f_is_t.clone(),
    ];
    let mut third = ctx.clone();
    third.push(at(f, &b));
    let p = rule(
        RuleApp::new(Rule::RI)
            .x("x")
            .fa(f.clone())
            .fb(g.clone())
            .t(t.clone())
            .param(name(&b)),
        vec![
            to(forward(f, &a, t), ctx.clone(), vec![at(f, t)]),
            to(ProofTree::axiom(at(g, t)), ctx, vec![at(g, t)]),
            to(pi, third, vec![eq(b, t.clone())]),
        ],
    );
    let p = rule(
        RuleApp::new(Rule::LI1).x("x").fa(f.clone()).fb(xt).param(name(&a)),
        vec![p],
    );
    rule(RuleApp::new(Rule::LC).fa(the_f_is_t), vec![p])
}

/// `Ix[F, x = c], Ix[F, G] ⇒ G(c)`
pub fn leibniz_mimic_2() -> ProofTree {
    leibniz_mimic_2_for(&p1("F", var("x")), &p1("G", var("x")), &cst("c"))
}

/// `Ix[F, x = t], Ix[F, G] ⇒ G(t)` for `f` in `x`, atomic `g` and ground `t`.
pub fn leibniz_mimic_2_for(f: &Formula, g: &Formula, t: &Term) -> ProofTree {
    let [a, b] = params(["a", "b"], &[f, g], t);
    let xt = eq(var("x"), t.clone());
    let the_f_is_g = Formula::iq("x", f.clone(), g.clone());

    let ctx = vec![at(f, &b), eq(b.clone(), t.clone()), at(f, &a), at(g, &a)];
    let p = rule(
        RuleApp::new(Rule::LI2)
            .x("x")
            .fa(f.clone())
            .fb(g.clone())
            .fc(g.clone())
            .t1(t.clone())
            .t2(a.clone()),
        vec![
            to(forward(f, &b, t), ctx.clone(), vec![at(f, t)]),
            to(ProofTree::axiom(at(f, &a)), ctx.clone(), vec![at(f, &a)]),
            to(ProofTree::axiom(at(g, &a)), ctx, vec![at(g, &a)]),
        ],
    );
    let p = rule(
        RuleApp::new(Rule::LI1).x("x").fa(f.clone()).fb(xt).param(name(&b)),
        vec![p],
    );
    let p = rule(
        RuleApp::new(Rule::LI1).x("x").fa(f.clone()).fb(g.clone()).param(name(&a)),
        vec![p],
    );
    rule(RuleApp::new(Rule::LC).fa(the_f_is_g), vec![p])
}

/// `Ix[F, Iy[G(y), x = y]], Ix[F, H] ⇒ Ix[G, H]`
pub fn leibniz_mimic_3() -> ProofTree {
    let (a, b, c, e) = (cst("a"), cst("b"), cst("c"), cst("e"));
    let fx = p1("F", var("x"));
    let gx = p1("G", var("x"));
    let hx = p1("H", var("x"));
    let gy = p1("G", var("y"));
    let inner = |t: Term| Formula::iq("y", gy.clone(), eq(t, var("y")));
    let the_f_is_h = Formula::iq("x", fx.clone(), hx.clone());
    let the_g_is_a = inner(a.clone());

    let ctx = vec![
        the_f_is_h.clone(),
        the_g_is_a.clone(),
        p1("F", a.clone()),
        p1("G", b.clone()),
        eq(a.clone(), b.clone()),
        p1("F", c.clone()),
        p1("H", c.clone()),
    ];
    let without = |drop: &Formula| -> Vec<Formula> {
        let mut v = ctx.clone();
        let i = v.iter().position(|f| f == drop).unwrap();
        v.remove(i);
        v
    };

    // Γ ⇒ G(b)
    let first = to(ProofTree::axiom(p1("G", b.clone())), ctx.clone(), vec![p1("G", b.clone())]);

    // Γ ⇒ H(b) by uniqueness of the F
    let g2 = without(&the_f_is_h);
    let second = rule(
        RuleApp::new(Rule::LI2)
            .x("x")
            .fa(fx.clone())
            .fb(hx.clone())
            .fc(hx.clone())
            .t1(b.clone())
            .t2(c.clone()),
        vec![
            to(eq_step("F", a.clone(), b.clone()), g2.clone(), vec![p1("F", b.clone())]),
            to(ProofTree::axiom(p1("F", c.clone())), g2.clone(), vec![p1("F", c.clone())]),
            to(ProofTree::axiom(p1("H", c.clone())), g2, vec![p1("H", c.clone())]),
        ],
    );

    // G(e), Γ ⇒ e = b by uniqueness of the G
    let mut g3 = without(&the_g_is_a);
    g3.push(p1("G", e.clone()));
    let third = rule(
        RuleApp::new(Rule::LI2)
            .x("y")
            .fa(gy.clone())
            .fb(eq(a.clone(), var("y")))
            .fc(eq(var("y"), b.clone()))
            .t1(e.clone())
            .t2(b.clone()),
        vec![
            to(ProofTree::axiom(p1("G", e.clone())), g3.clone(), vec![p1("G", e.clone())]),
            to(ProofTree::axiom(p1("G", b.clone())), g3.clone(), vec![p1("G", b.clone())]),
            to(identity_law(&b), g3, vec![eq(b.clone(), b.clone())]),
        ],
    );

    let p = rule(
        RuleApp::new(Rule::RI)
            .x("x")
            .fa(gx)
            .fb(hx.clone())
            .t(b)
            .param("e"),
        vec![first, second, third],
    );
    let p = rule(
        RuleApp::new(Rule::LI1).x("x").fa(fx.clone()).fb(hx).param("c"),
        vec![p],
    );
    let p = rule(RuleApp::new(Rule::LC).fa(the_f_is_h), vec![p]);
    let p = rule(
        RuleApp::new(Rule::LI1)
            .x("y")
            .fa(gy.clone())
            .fb(eq(a, var("y")))
            .param("b"),
        vec![p],
    );
    let p = rule(RuleApp::new(Rule::LC).fa(the_g_is_a), vec![p]);
    rule(
        RuleApp::new(Rule::LI1)
            .x("x")
            .fa(fx)
            .fb(inner(var("x")))
            .param("a"),
        vec![p],
    )
}

/// `⇒ ∀y(Ix[F, x = y] → ∀x(F ↔ x = y))`, with one `RIff` step.
pub fn half_ll() -> ProofTree {
    half_ll_for(&p1("F", var("x")))
}

/// `⇒ ∀y(Ix[F, x = y] → ∀x(F ↔ x = y))` for an atomic `f` in `x`.
pub fn half_ll_for(f: &Formula) -> ProofTree {
    let [a, b, c] = params(["a", "b", "c"], &[f], &var("y"));
    let xb = eq(var("x"), b.clone());
    let the_f_is_b = Formula::iq("x", f.clone(), xb.clone());

    let ctx = vec![at(f, &a), eq(a.clone(), b.clone()), at(f, &c)];
    let uniq = rule(
        RuleApp::new(Rule::LI2)
            .x("x")
            .fa(f.clone())
            .fb(xb.clone())
            .fc(xb.clone())
            .t1(c.clone())
            .t2(b.clone()),
        vec![
            to(ProofTree::axiom(at(f, &c)), ctx.clone(), vec![at(f, &c)]),
            to(forward(f, &a, &b), ctx.clone(), vec![at(f, &b)]),
            // the displayed leaf reads `⇒ c = c`; the schema needs C(t2), i.e. b = b
            to(identity_law(&b), ctx, vec![eq(b.clone(), b.clone())]),
        ],
    );
    // F(a), a = b, c = b ⇒ F(c)
    let back = leibniz("x", f, &c, &b).expect("atomic Leibniz");
    let back = rule(
        RuleApp::new(Rule::EqI)
            .x("x")
            .fa(f.clone())
            .t1(a.clone())
            .t2(b.clone()),
        vec![back],
    );
    let gamma = vec![the_f_is_b.clone(), at(f, &a), eq(a.clone(), b.clone())];
    let mut back_ctx = gamma.clone();
    back_ctx.push(eq(c.clone(), b.clone()));
    let back = to(back, back_ctx, vec![at(f, &c)]);

    let p = rule(
        RuleApp::new(Rule::RIff)
            .fa(at(f, &c))
            .fb(eq(c.clone(), b.clone())),
        vec![uniq, back],
    );
    let p = rule(RuleApp::new(Rule::LW).fa(Formula::Exists(c.clone())), vec![p]);
    let body = Formula::iff(f.clone(), xb.clone());
    let p = rule(
        RuleApp::new(Rule::RForall).x("x").fa(body.clone()).param(name(&c)),
        vec![p],
    );
    let p = rule(
        RuleApp::new(Rule::LI1).x("x").fa(f.clone()).fb(xb).param(name(&a)),
        vec![p],
    );
    let p = rule(RuleApp::new(Rule::LC).fa(the_f_is_b.clone()), vec![p]);
    let p = rule(
        RuleApp::new(Rule::RImp)
            .fa(the_f_is_b)
            .fb(Formula::forall("x", body)),
        vec![p],
    );
    let p = rule(RuleApp::new(Rule::LW).fa(Formula::Exists(b.clone())), vec![p]);
    let xy = eq(var("x"), var("y"));
    let scheme = Formula::imp(
        Formula::iq("x", f.clone(), xy.clone()),
        Formula::forall("x", Formula::iff(f.clone(), xy)),
    );
    rule(
        RuleApp::new(Rule::RForall).x("y").fa(scheme).param(name(&b)),
        vec![p],
    )
}

/// Every golden derivation by name.
pub fn derivation_corpus() -> BTreeMap<&'static str, CorpusEntry> {
    let entries = [
        ("law-of-identity", "|- t = t", law_of_identity()),
        ("leibniz-law", "t1 = t2, A(t2) |- A(t1)", leibniz_law()),
        (
            "leibniz-mimic-1",
            "Ix[A, x = t], B(t) |- Ix[A, B]",
            leibniz_mimic_1(),
        ),
        (
            "leibniz-mimic-2",
            "Ix[A, x = t], Ix[A, B] |- B(t)",
            leibniz_mimic_2(),
        ),
        (
            "leibniz-mimic-3",
            "Ix[A, Iy[B, x = y]], Ix[A, C] |- Ix[B, C]",
            leibniz_mimic_3(),
        ),
        (
            "half-LL",
            "|- forall y. (Ix[A, x = y] -> forall x. (A <-> x = y))",
            half_ll(),
        ),
        ("FL-analogue", "|- Ix[x = t, x = t]", fl_analogue()),
    ];
    entries
        .into_iter()
        .map(|(name, description, proof)| {
            (
                name,
                CorpusEntry {
                    name,
                    description,
                    proof,
                },
            )
        })
        .collect()
}
