//! Exhaustive enumeration of finite structures over a signature.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use super::{satisfies_sequent, Assignment, Element, SemanticsError, Structure};
use crate::kernel::Sequent;
use crate::syntax::Signature;

/// All structures over `sig` with carrier `{0, …, n-1}`, addressable by index.
///
/// A structure is a mixed-radix number: one bit per element for the inner
/// domain, one bit per tuple for each predicate, one digit in `0..n` per
/// constant and per function-table entry.
#[derive(Clone, Debug)]
pub struct StructureSpace {
    sig: Signature,
    n: usize,
    radices: Vec<u128>,
    len: Option<u128>,
}

fn tuples(n: usize, arity: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

impl StructureSpace {
    pub fn new(sig: &Signature, n: usize) -> Self {
        let mut radices = vec![2u128; n];
        for &k in sig.predicates.values() {
            radices.extend(std::iter::repeat_n(2, n.pow(k as u32)));
        }
        radices.extend(std::iter::repeat_n(n as u128, sig.constants.len()));
        for &k in sig.functions.values() {
            radices.extend(std::iter::repeat_n(n as u128, n.pow(k as u32)));
        }
        let len = radices.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r));
        StructureSpace {
            sig: sig.clone(),
            n,
            radices,
            len,
        }
    }

    /// Number of structures; `None` on overflow.
    pub fn len(&self) -> Option<u128> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    /// The structure with index `idx` (least significant digit first).
    pub fn get(&self, mut idx: u128) -> Structure {
        let mut digits = self.radices.iter().map(|&r| {
            let d = idx % r;
            idx /= r;
            d as usize
        });
        let n = self.n;
        let mut m = Structure::new(n);
        for d in 0..n {
            if digits.next() == Some(1) {
                m.inner.insert(d);
            }
        }
        for (p, &k) in &self.sig.predicates {
            let ext = tuples(n, k)
                .into_iter()
                .filter(|_| digits.next() == Some(1))
                .collect();
            m.preds.insert(p.clone(), ext);
            m.pred_arity.insert(p.clone(), k);
        }
        for c in &self.sig.constants {
            m.consts.insert(c.clone(), digits.next().unwrap());
        }
        for (f, &k) in &self.sig.functions {
            let table = tuples(n, k)
                .into_iter()
                .map(|t| (t, digits.next().unwrap()))
                .collect();
            m.funcs.insert(f.clone(), table);
        }
        m
    }
}

/// Total number of structures with outer size `1..=max_outer`.
pub fn count_structures(sig: &Signature, max_outer: usize) -> Option<u128> {
    (1..=max_outer).try_fold(0u128, |acc, n| acc.checked_add(StructureSpace::new(sig, n).len()?))
}

/// Every structure over `sig` with `1 ≤ |outer| ≤ max_outer`, smaller domains first.
pub fn enumerate_structures(
    sig: &Signature,
    max_outer: usize,
) -> Result<impl Iterator<Item = Structure>, SemanticsError> {
    if max_outer == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    let spaces: Vec<StructureSpace> = (1..=max_outer).map(|n| StructureSpace::new(sig, n)).collect();
    if spaces.iter().any(|s| s.len().is_none()) {
        return Err(SemanticsError::SearchSpaceTooLarge);
    }
    Ok(spaces
        .into_iter()
        .flat_map(|s| (0..s.len().unwrap()).map(move |i| s.get(i))))
}

fn sequent_signature(q: &Sequent, sig: &Signature) -> Result<Signature, SemanticsError> {
    let mut full = sig.clone();
    for a in q.formulas() {
        full.absorb_formula(a)
            .map_err(|e| SemanticsError::Uninterpreted(e.to_string()))?;
    }
    Ok(full)
}

fn free_vars(q: &Sequent) -> Vec<String> {
    let mut vars = BTreeSet::new();
    for a in q.formulas() {
        vars.extend(a.free_vars());
    }
    vars.into_iter().collect()
}

fn assignments(vars: &[String], n: usize) -> Vec<Assignment> {
    tuples(n, vars.len())
        .into_iter()
        .map(|vals| Assignment(vars.iter().cloned().zip(vals).collect()))
        .collect()
}

fn falsify(m: &Structure, q: &Sequent, vars: &[String]) -> Result<Option<Assignment>, SemanticsError> {
    for s in assignments(vars, m.outer) {
        if !satisfies_sequent(m, &s, q)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// First structure (in enumeration order) and assignment falsifying `q`.
/// The signature is extended by the symbols of `q`.
pub fn find_countermodel(
    q: &Sequent,
    sig: &Signature,
    max_outer: usize,
) -> Result<Option<(Structure, Assignment)>, SemanticsError> {
    let sig = sequent_signature(q, sig)?;
    let vars = free_vars(q);
    for m in enumerate_structures(&sig, max_outer)? {
        if let Some(s) = falsify(&m, q, &vars)? {
            return Ok(Some((m, s)));
        }
    }
    Ok(None)
}

/// Like [`find_countermodel`], splitting each domain size across `jobs`
/// threads. Returns the same witness as the sequential search.
pub fn find_countermodel_parallel(
    q: &Sequent,
    sig: &Signature,
    max_outer: usize,
    jobs: usize,
) -> Result<Option<(Structure, Assignment)>, SemanticsError> {
    if jobs <= 1 {
        return find_countermodel(q, sig, max_outer);
    }
    if max_outer == 0 {
        return Err(SemanticsError::EmptyDomain);
    }
    let sig = sequent_signature(q, sig)?;
    let vars = free_vars(q);
    for n in 1..=max_outer {
        let space = StructureSpace::new(&sig, n);
        let len = space
            .len()
            .and_then(|l| u64::try_from(l).ok())
            .ok_or(SemanticsError::SearchSpaceTooLarge)?;
        let best = AtomicU64::new(u64::MAX);
        let results: Vec<Result<Option<(u64, Assignment)>, SemanticsError>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs as u64)
                    .map(|w| {
                        let (space, vars, best) = (&space, &vars, &best);
                        scope.spawn(move || {
                            let mut i = w;
                            while i < len && i < best.load(Ordering::Relaxed) {
                                let m = space.get(i as u128);
                                if let Some(s) = falsify(&m, q, vars)? {
                                    best.fetch_min(i, Ordering::Relaxed);
                                    return Ok(Some((i, s)));
                                }
                                i += jobs as u64;
                            }
                            Ok(None)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
        let mut found: Option<(u64, Assignment)> = None;
        for r in results {
            if let Some((i, s)) = r? {
                if found.as_ref().is_none_or(|(j, _)| i < *j) {
                    found = Some((i, s));
                }
            }
        }
        if let Some((i, s)) = found {
            return Ok(Some((space.get(i as u128), s)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::satisfies;
    use crate::syntax::{parse_formula_in, parse_sequent_parts};

    fn seq(text: &str) -> Sequent {
        let (a, s) = parse_sequent_parts(text, &mut Signature::new()).unwrap();
        Sequent::new(a, s)
    }

    // closed form: Σ_n 2^n · Π_P 2^(n^k) · n^|consts| · Π_f n^(n^k)
    fn count_oracle(preds: &[u32], consts: u32, funcs: &[u32], max: u32) -> u128 {
        (1..=max as u128)
            .map(|n| {
                let mut c = 2u128.pow(n as u32) * n.pow(consts);
                for &k in preds {
                    c *= 2u128.pow(n.pow(k) as u32);
                }
                for &k in funcs {
                    c *= n.pow(n.pow(k) as u32);
                }
                c
            })
            .sum()
    }

    #[test]
    fn counts() {
        let p = Signature::new().with_predicate("P", 1).unwrap();
        assert_eq!(enumerate_structures(&p, 1).unwrap().count(), 4);
        assert!(matches!(enumerate_structures(&p, 0), Err(SemanticsError::EmptyDomain)));
        let sigs = [
            (Signature::new().with_predicate("P", 1).unwrap(), vec![1], 0, vec![]),
            (
                Signature::new().with_predicate("P", 1).unwrap().with_constant("c").unwrap(),
                vec![1],
                1,
                vec![],
            ),
            (
                Signature::new()
                    .with_predicate("R", 2)
                    .unwrap()
                    .with_constant("c")
                    .unwrap()
                    .with_constant("d")
                    .unwrap()
                    .with_function("f", 1)
                    .unwrap(),
                vec![2],
                2,
                vec![1],
            ),
        ];
        for (sig, preds, consts, funcs) in sigs {
            for max in 1..=3 {
                let expected = count_oracle(&preds, consts, &funcs, max);
                assert_eq!(count_structures(&sig, max as usize), Some(expected));
                if expected > 20_000 {
                    continue;
                }
                let all: Vec<Structure> = enumerate_structures(&sig, max as usize).unwrap().collect();
                assert_eq!(all.len() as u128, expected);
                assert!(all.iter().all(Structure::well_formed));
                // each exactly once
                let distinct: BTreeSet<String> = all.iter().map(|m| m.to_string()).collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
    }

    #[test]
    fn empty_inner_domain_is_enumerated() {
        let p = Signature::new().with_predicate("P", 1).unwrap();
        assert!(enumerate_structures(&p, 2).unwrap().any(|m| m.inner.is_empty() && m.outer == 2));
    }

    #[test]
    fn countermodels() {
        let q = seq("forall x. (A(x) <-> x = b) |- I x [A(x), x = b]");
        let (m, s) = find_countermodel(&q, &Signature::new(), 3).unwrap().unwrap();
        // smallest witness: empty inner domain, nothing is A
        assert_eq!(m.outer, 1);
        assert!(m.inner.is_empty());
        assert_eq!(satisfies_sequent(&m, &s, &q), Ok(false));

        let q = seq("|- I x [F(x), I y [F(y), x = y]]");
        let (m, s) = find_countermodel(&q, &Signature::new(), 3).unwrap().unwrap();
        assert!(m.outer <= 2);
        assert_eq!(satisfies_sequent(&m, &s, &q), Ok(false));

        assert_eq!(find_countermodel(&seq("|- c = c"), &Signature::new(), 3), Ok(None));
    }

    #[test]
    fn open_sequents_try_all_assignments() {
        let mut sig = Signature::new();
        let a = parse_formula_in("P(x)", &mut sig, &["x".to_string()]).unwrap();
        let q = Sequent::new(vec![], vec![a.clone()]);
        let (m, s) = find_countermodel(&q, &sig, 1).unwrap().unwrap();
        assert_eq!(satisfies(&m, &s, &a), Ok(false));
    }

    #[test]
    fn parallel_matches_sequential() {
        for text in [
            "forall x. (A(x) <-> x = b) |- I x [A(x), x = b]",
            "|- I x [F(x), I y [F(y), x = y]]",
            "P(c), c = d |- P(d)",
            "E! c |- exists x. R(x, c)",
        ] {
            let q = seq(text);
            let one = find_countermodel(&q, &Signature::new(), 3).unwrap();
            for jobs in [2, 3, 5] {
                assert_eq!(
                    find_countermodel_parallel(&q, &Signature::new(), 3, jobs).unwrap(),
                    one,
                    "{text}"
                );
            }
        }
    }
}
