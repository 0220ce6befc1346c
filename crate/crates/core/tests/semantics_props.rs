//! Semantic invariants over random structures and formulas.

mod common;

use common::{assignment, formula, structure, subformulas, Vocab, VARS};
use cpfi::semantics::{enumerate_structures, eval_term, satisfies, Assignment};
use cpfi::syntax::{alphabetic_variant, is_free_for, substitute, Formula, Signature, Term};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    // ⊨ A[t/x] [s]  iff  ⊨ A [s(x | s̄(t))]
    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = Vocab::full();
        let m = structure(&mut rng, &v, 3);
        let s = assignment(&mut rng, &m);
        let a = formula(&mut rng, &v, &VARS, 4);
        let t = common::term(&mut rng, &v, &VARS, 2);
        for x in VARS {
            if !is_free_for(&t, x, &a) {
                prop_assert!(substitute(&a, x, &t).is_err());
                continue;
            }
            let lhs = satisfies(&m, &s, &substitute(&a, x, &t).unwrap()).unwrap();
            let d = eval_term(&m, &s, &t).unwrap();
            let rhs = satisfies(&m, &s.updated(x, d), &a).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn alphabetic_variants_agree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = Vocab::full();
        let m = structure(&mut rng, &v, 3);
        let s = assignment(&mut rng, &m);
        let a = formula(&mut rng, &v, &VARS, 4);
        let t = common::term(&mut rng, &v, &VARS, 1);
        for x in VARS {
            let b = alphabetic_variant(&a, x, &t);
            prop_assert!(is_free_for(&t, x, &b));
            prop_assert_eq!(satisfies(&m, &s, &a).unwrap(), satisfies(&m, &s, &b).unwrap());
        }
    }

    // whenever Ix[A, B] holds, exactly one outer element satisfies A
    #[test]
    fn description_witness_is_unique(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = Vocab::full();
        let m = structure(&mut rng, &v, 3);
        let s = assignment(&mut rng, &m);
        let x = VARS[(seed % 3) as usize];
        let (b, c) = (formula(&mut rng, &v, &VARS, 3), formula(&mut rng, &v, &VARS, 3));
        let a = Formula::iq(x, b, c);
        for sub in subformulas(&a) {
            let Formula::Iq(y, b, _) = sub else { continue };
            if satisfies(&m, &s, sub).unwrap() {
                let witnesses = m
                    .elements()
                    .filter(|&d| satisfies(&m, &s.updated(y, d), b).unwrap())
                    .count();
                prop_assert_eq!(witnesses, 1);
            }
        }
    }

    // ∀ looks only at the inner domain
    #[test]
    fn universal_ranges_over_inner(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = Vocab::full();
        let m = structure(&mut rng, &v, 3);
        let s = assignment(&mut rng, &m);
        let a = formula(&mut rng, &v, &VARS, 3);
        let expected = m.inner.iter().all(|&d| satisfies(&m, &s.updated("x", d), &a).unwrap());
        prop_assert_eq!(satisfies(&m, &s, &Formula::forall("x", a)).unwrap(), expected);
    }
}

/// `Ix[A, B]` with `x` not free in `A` holds iff the domain is a singleton
/// and both `A` and `B` hold.
#[test]
fn vacuous_description_exhaustive() {
    let sig = Signature::new()
        .with_predicate("P", 1)
        .unwrap()
        .with_constant("c")
        .unwrap();
    let c = Term::cst("c");
    let x = Term::var("x");
    let p = |t: &Term| Formula::pred("P", vec![t.clone()]);
    let closed = [
        p(&c),
        Formula::not(p(&c)),
        Formula::forall("y", p(&Term::var("y"))),
        Formula::exists("y", p(&Term::var("y"))),
        Formula::Exists(c.clone()),
        Formula::eq(c.clone(), c.clone()),
    ];
    let bodies = [p(&x), Formula::not(p(&x)), p(&c), Formula::eq(x.clone(), c.clone()), Formula::Exists(x.clone())];
    let mut checked = 0;
    for m in enumerate_structures(&sig, 3).unwrap() {
        let s = Assignment::new();
        for a in &closed {
            assert!(!a.free_vars().contains("x"));
            for b in &bodies {
                let got = satisfies(&m, &s, &Formula::iq("x", a.clone(), b.clone())).unwrap();
                let expected = m.outer == 1
                    && satisfies(&m, &s, a).unwrap()
                    && satisfies(&m, &s.updated("x", 0), b).unwrap();
                assert_eq!(got, expected, "{m}\nA = {a}, B = {b}");
                checked += 1;
            }
        }
    }
    // 4 + 32 + 192 structures
    assert_eq!(checked, 228 * closed.len() * bodies.len());
}
