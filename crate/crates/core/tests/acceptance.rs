//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the lines always show up in
//! `cargo test` output; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{assignment, closed_sequent, formula, structure, subformulas, Vocab, VARS};
use cpfi::cutelim::fixtures::cut_fixtures;
use cpfi::cutelim::{eliminate_cuts, CutElimError};
use cpfi::kernel::{check_proof, derivation_corpus, MetaKey, ProofTree, Rule, Sequent};
use cpfi::semantics::{
    enumerate_structures, eval_term, find_countermodel, satisfies, satisfies_sequent, Assignment,
};
use cpfi::syntax::{is_free_for, parse_sequent_parts, substitute, Formula, Signature, Term};
use cpfi::tableau::{prove, Budget, TableauResult};
use rand::rngs::StdRng;
use rand::SeedableRng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn seq(text: &str) -> Sequent {
    let (a, s) = parse_sequent_parts(text, &mut Signature::new()).unwrap();
    Sequent::new(a, s)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn golden_derivations() -> Outcome {
    let start = Instant::now();
    let corpus = derivation_corpus();
    let failed: Vec<String> = corpus
        .iter()
        .filter(|(_, e)| check_proof(&e.proof).is_err())
        .map(|(n, _)| n.to_string())
        .collect();
    let t = start.elapsed();
    outcome(
        failed.is_empty() && corpus.len() == 7 && t < Duration::from_secs(1),
        format!("{}/{} derivations check in {} (limit 1s) {:?}", corpus.len() - failed.len(), corpus.len(), secs(t), failed),
    )
}

fn non_derivability() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for text in [
        "forall x. (A(x) <-> x = b) |- I x [A(x), x = b]",
        "|- I x [F(x), I y [F(y), x = y]]",
    ] {
        let q = seq(text);
        let start = Instant::now();
        let r = find_countermodel(&q, &Signature::new(), 3).unwrap();
        let t = start.elapsed();
        match r {
            Some((m, s)) => {
                let verified = satisfies_sequent(&m, &s, &q) == Ok(false);
                ok &= verified && m.outer <= 2 && t < Duration::from_secs(5);
                notes.push(format!("outer {} verified={verified} in {}", m.outer, secs(t)));
            }
            None => {
                ok = false;
                notes.push("no witness".into());
            }
        }
    }
    outcome(ok, notes.join("; "))
}

fn cut_kinds(p: &ProofTree) -> BTreeSet<&'static str> {
    p.nodes()
        .into_iter()
        .filter(|n| n.app.rule == Rule::Cut)
        .filter_map(|n| n.app.get_formula(MetaKey::CutFormula).ok())
        .map(|a| match a {
            Formula::Iq(..) => "I",
            Formula::Forall(..) => "∀",
            Formula::Imp(..) => "→",
            Formula::Not(_) => "¬",
            _ => "atomic",
        })
        .collect()
}

fn cut_elimination(endsequents: &mut Vec<Sequent>) -> Outcome {
    let fixtures = cut_fixtures();
    let mut kinds = BTreeSet::new();
    let mut failures = Vec::new();
    let start = Instant::now();
    for fx in &fixtures {
        kinds.extend(cut_kinds(&fx.proof));
        endsequents.push(fx.proof.conclusion.clone());
        match eliminate_cuts(&fx.proof) {
            Ok(q) => {
                let good = check_proof(&q).is_ok() && q.is_cut_free() && q.conclusion == fx.proof.conclusion;
                if !good {
                    failures.push(fx.name.clone());
                }
            }
            Err(e) => failures.push(format!("{}: {e}", fx.name)),
        }
    }
    let t = start.elapsed();
    let all_kinds = ["I", "∀", "→", "¬"].iter().all(|k| kinds.contains(k));
    outcome(
        failures.is_empty() && fixtures.len() >= 20 && all_kinds && t < Duration::from_secs(10),
        format!(
            "{}/{} fixtures cut-free, checked, same endsequent; cut kinds {:?}; {} (limit 10s) {:?}",
            fixtures.len() - failures.len(),
            fixtures.len(),
            kinds,
            secs(t),
            failures
        ),
    )
}

fn soundness(endsequents: &[Sequent]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let distinct: BTreeSet<String> = endsequents.iter().map(|q| q.to_string()).collect();
    for q in endsequents {
        if let Some((m, _)) = find_countermodel(q, &Signature::new(), 3).unwrap() {
            bad.push(format!("{q} (outer {})", m.outer));
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(60),
        format!(
            "{} endsequents ({} distinct) without countermodel up to outer 3 in {} (limit 60s) {:?}",
            endsequents.len(),
            distinct.len(),
            secs(t),
            bad
        ),
    )
}

/// Criteria 5 and 6 share one random corpus.
fn random_semantics() -> (Outcome, Outcome) {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let v = Vocab::full();
    let (mut admissible, mut rejected, mut violations) = (0, 0, 0);
    let (mut satisfied_iq, mut uniqueness_violations) = (0, 0);
    while admissible < 1000 {
        let m = structure(&mut rng, &v, 3);
        let s = assignment(&mut rng, &m);
        let a = formula(&mut rng, &v, &VARS, 4);
        let t = common::term(&mut rng, &v, &VARS, 2);
        let x = VARS[admissible % 3];
        let mut check_iq = |f: &Formula, s: &Assignment| {
            for sub in subformulas(f) {
                let Formula::Iq(y, b, _) = sub else { continue };
                if satisfies(&m, s, sub).unwrap() {
                    satisfied_iq += 1;
                    let n = m.elements().filter(|&d| satisfies(&m, &s.updated(y, d), b).unwrap()).count();
                    if n != 1 {
                        uniqueness_violations += 1;
                    }
                }
            }
        };
        check_iq(&a, &s);
        if !is_free_for(&t, x, &a) {
            rejected += 1;
            continue;
        }
        admissible += 1;
        let at = substitute(&a, x, &t).unwrap();
        check_iq(&at, &s);
        let d = eval_term(&m, &s, &t).unwrap();
        if satisfies(&m, &s, &at).unwrap() != satisfies(&m, &s.updated(x, d), &a).unwrap() {
            violations += 1;
        }
    }
    (
        outcome(
            violations == 0,
            format!("{admissible} admissible cases ({rejected} inadmissible skipped), {violations} violations"),
        ),
        outcome(
            uniqueness_violations == 0 && satisfied_iq > 0,
            format!("{satisfied_iq} satisfied descriptions, {uniqueness_violations} with a witness set of size != 1"),
        ),
    )
}

fn vacuous_binding() -> Outcome {
    let sig = Signature::new().with_predicate("P", 1).unwrap().with_constant("c").unwrap();
    let (c, x, y) = (Term::cst("c"), Term::var("x"), Term::var("y"));
    let p = |t: &Term| Formula::pred("P", vec![t.clone()]);
    let closed = [
        p(&c),
        Formula::not(p(&c)),
        Formula::forall("y", p(&y)),
        Formula::exists("y", p(&y)),
        Formula::Exists(c.clone()),
    ];
    let bodies = [p(&x), Formula::not(p(&x)), p(&c), Formula::eq(x.clone(), c.clone())];
    let (mut structures, mut cases, mut bad) = (0, 0, 0);
    for m in enumerate_structures(&sig, 3).unwrap() {
        structures += 1;
        let s = Assignment::new();
        for a in &closed {
            for b in &bodies {
                cases += 1;
                let got = satisfies(&m, &s, &Formula::iq("x", a.clone(), b.clone())).unwrap();
                let expected = m.outer == 1 && satisfies(&m, &s, a).unwrap() && satisfies(&m, &s.updated("x", 0), b).unwrap();
                if got != expected {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{structures} structures x {} formulas = {cases} cases, {bad} mismatches", closed.len() * bodies.len()))
}

const AGREEMENT_BUDGET: Budget = Budget {
    max_gamma: 16,
    max_fresh: 6,
    max_nodes: 4000,
};

fn tableau_agreement() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7ab1_ea00);
    let v = Vocab::small();
    let (mut proofs, mut models, mut unknown, mut bad) = (0, 0, 0, Vec::new());
    let n = 300;
    let start = Instant::now();
    for _ in 0..n {
        let q = closed_sequent(&mut rng, &v, 3);
        match prove(&q, &AGREEMENT_BUDGET) {
            Ok(TableauResult::Proof(_)) => {
                proofs += 1;
                if let Some((m, _)) = find_countermodel(&q, &Signature::new(), 3).unwrap() {
                    bad.push(format!("proved but falsified at outer {}: {q}", m.outer));
                }
            }
            Ok(TableauResult::Countermodel { structure, assignment, .. }) => {
                models += 1;
                if satisfies_sequent(&structure, &assignment, &q) != Ok(false) {
                    bad.push(format!("countermodel does not falsify {q}"));
                }
            }
            Ok(TableauResult::Unknown(_)) => unknown += 1,
            Err(e) => bad.push(format!("{q}: {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{n} sequents: {proofs} proofs, {models} countermodels, {unknown} unknown ({:.1}% unknown) in {} {:?}",
            100.0 * unknown as f64 / n as f64,
            secs(start.elapsed()),
            bad
        ),
    )
}

fn tableau_corpus() -> Outcome {
    let default = Budget::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for text in ["|- I x [x = c, x = c]", "P(c) |- P(c)"] {
        let r = prove(&seq(text), &default).unwrap();
        let closed = matches!(r, TableauResult::Proof(_));
        ok &= closed;
        notes.push(format!("`{text}` {}", r.verdict()));
    }
    if let TableauResult::Proof(t) = prove(&seq("P(c) |- P(c)"), &default).unwrap() {
        // root plus one closure leaf
        ok &= t.size() == 2;
    }
    let half_ll = derivation_corpus()["half-LL"].proof.conclusion.clone();
    match prove(&half_ll, &default).unwrap() {
        TableauResult::Proof(t) => notes.push(format!("half-LL proof at default budget {default:?}, {} nodes", t.size())),
        other => {
            ok = false;
            notes.push(format!("half-LL {} at default budget {default:?}", other.verdict()));
        }
    }
    outcome(ok, notes.join("; "))
}

fn main() {
    let mut endsequents: Vec<Sequent> = derivation_corpus().values().map(|e| e.proof.conclusion.clone()).collect();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "golden derivations check", golden_derivations()));
    results.push((2, "non-derivability witnesses", non_derivability()));
    results.push((3, "cut elimination on fixtures", cut_elimination(&mut endsequents)));
    results.push((4, "desk-scale soundness", soundness(&endsequents)));
    let (subst, unique) = random_semantics();
    results.push((5, "semantic substitution lemma", subst));
    results.push((6, "description witness uniqueness", unique));
    results.push((7, "vacuous description binding", vacuous_binding()));
    results.push((8, "tableau agrees with semantics", tableau_agreement()));
    results.push((9, "tableau proves the valid corpus", tableau_corpus()));

    let mut failed = 0;
    for (n, name, o) in &results {
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {n} {mark}: {name} -- {}", o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    // keep the known cut-elimination gap visible next to the criteria
    let stuck = cpfi::cutelim::fixtures::stuck_fixtures();
    for fx in stuck {
        if let Err(e @ CutElimError::StuckAtomicCut { .. }) = eliminate_cuts(&fx.proof) {
            println!("note: {} outside the reduction lemmas: {e}", fx.name);
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
