//! Random formulas, terms and finite structures for property tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cpfi::kernel::Sequent;
use cpfi::semantics::{Assignment, Element, Structure};
use cpfi::syntax::{Formula, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Symbols the generators draw from.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub unary: Vec<&'static str>,
    pub binary: Vec<&'static str>,
    pub consts: Vec<&'static str>,
    pub funcs: Vec<&'static str>,
    pub with_eq: bool,
    pub with_exists: bool,
}

impl Vocab {
    /// Two unary and one binary predicate, two constants, one function.
    pub fn full() -> Self {
        Vocab {
            unary: vec!["P", "Q"],
            binary: vec!["R"],
            consts: vec!["c", "d"],
            funcs: vec!["f"],
            with_eq: true,
            with_exists: true,
        }
    }

    /// Two unary predicates and two constants.
    pub fn small() -> Self {
        Vocab {
            unary: vec!["P", "Q"],
            binary: vec![],
            consts: vec!["c", "d"],
            funcs: vec![],
            with_eq: true,
            with_exists: true,
        }
    }
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn term(rng: &mut StdRng, v: &Vocab, vars: &[&str], depth: usize) -> Term {
    let nvars = vars.len();
    let nconsts = v.consts.len();
    let can_app = depth > 0 && !v.funcs.is_empty();
    let k = rng.gen_range(0..nvars + nconsts + usize::from(can_app));
    if k < nvars {
        Term::var(vars[k])
    } else if k < nvars + nconsts {
        Term::cst(v.consts[k - nvars])
    } else {
        let f = v.funcs.choose(rng).unwrap();
        Term::app(*f, vec![term(rng, v, vars, depth - 1)])
    }
}

fn atom(rng: &mut StdRng, v: &Vocab, vars: &[&str]) -> Formula {
    let mut kinds = vec![0];
    if !v.binary.is_empty() {
        kinds.push(1);
    }
    if v.with_eq {
        kinds.push(2);
    }
    if v.with_exists {
        kinds.push(3);
    }
    let t = |rng: &mut StdRng| term(rng, v, vars, 1);
    match *kinds.choose(rng).unwrap() {
        0 => Formula::pred(*v.unary.choose(rng).unwrap(), vec![t(rng)]),
        1 => {
            let (a, b) = (t(rng), t(rng));
            Formula::pred(*v.binary.choose(rng).unwrap(), vec![a, b])
        }
        2 => {
            let (a, b) = (t(rng), t(rng));
            Formula::eq(a, b)
        }
        _ => Formula::Exists(t(rng)),
    }
}

/// A formula of depth at most `depth` whose free variables are among `vars`.
pub fn formula(rng: &mut StdRng, v: &Vocab, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return atom(rng, v, vars);
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Formula::not(formula(rng, v, vars, d)),
        1 => Formula::imp(formula(rng, v, vars, d), formula(rng, v, vars, d)),
        2 => {
            let x = *VARS.choose(rng).unwrap();
            let inner = with(vars, x);
            Formula::forall(x, formula(rng, v, &inner, d))
        }
        _ => {
            let x = *VARS.choose(rng).unwrap();
            let inner = with(vars, x);
            Formula::iq(x, formula(rng, v, &inner, d), formula(rng, v, &inner, d))
        }
    }
}

fn with<'a>(vars: &[&'a str], x: &'a str) -> Vec<&'a str> {
    let mut out: Vec<&str> = vars.to_vec();
    if !out.contains(&x) {
        out.push(x);
    }
    out
}

/// A closed sequent with one to three formulas.
pub fn closed_sequent(rng: &mut StdRng, v: &Vocab, depth: usize) -> Sequent {
    let n = rng.gen_range(1..=3);
    let mut ante = Vec::new();
    let mut succ = Vec::new();
    for i in 0..n {
        let a = formula(rng, v, &[], depth);
        if i == 0 || rng.gen_bool(0.5) {
            succ.push(a);
        } else {
            ante.push(a);
        }
    }
    Sequent::new(ante, succ)
}

fn tuples(n: usize, k: usize) -> Vec<Vec<Element>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| (0..n).map(move |d| [t.clone(), vec![d]].concat()))
            .collect()
    })
}

/// A structure for the whole vocabulary with `1 ≤ outer ≤ max_outer`.
pub fn structure(rng: &mut StdRng, v: &Vocab, max_outer: usize) -> Structure {
    let n = rng.gen_range(1..=max_outer);
    let mut m = Structure::new(n);
    m.inner = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
    for (ps, k) in [(&v.unary, 1), (&v.binary, 2)] {
        for p in ps {
            let ext: BTreeSet<Vec<Element>> = tuples(n, k).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            m.preds.insert(p.to_string(), ext);
            m.pred_arity.insert(p.to_string(), k);
        }
    }
    for c in &v.consts {
        m.consts.insert(c.to_string(), rng.gen_range(0..n));
    }
    for f in &v.funcs {
        let table = tuples(n, 1).into_iter().map(|t| (t, rng.gen_range(0..n))).collect();
        m.funcs.insert(f.to_string(), table);
    }
    m
}

/// Values for every variable in [`VARS`].
pub fn assignment(rng: &mut StdRng, m: &Structure) -> Assignment {
    let mut s = Assignment::new();
    for x in VARS {
        s = s.updated(x, rng.gen_range(0..m.outer));
    }
    s
}

/// Every subformula, the formula itself first.
pub fn subformulas(a: &Formula) -> Vec<&Formula> {
    let mut out = vec![a];
    match a {
        Formula::Not(b) | Formula::Forall(_, b) => out.extend(subformulas(b)),
        Formula::Imp(b, c) | Formula::Iq(_, b, c) => {
            out.extend(subformulas(b));
            out.extend(subformulas(c));
        }
        _ => {}
    }
    out
}
