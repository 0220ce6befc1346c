//! Bounded ground tableaux.
//!
//! A sequent `Γ ⇒ Δ` is refuted by a tableau whose root branch holds `Γ`
//! and the negations of `Δ`. Branch identities are handled by congruence
//! closure, which is what substitution of identicals and reflexivity give on
//! atoms. Search is depth-first and deterministic; every γ instance (`∀`,
//! uniqueness leg of `I`, `¬I`) and every fresh parameter counts against a
//! per-branch [`Budget`].

mod branch;
mod extract;

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::kernel::Sequent;
use crate::semantics::{satisfies_sequent, Assignment, Structure};
use crate::syntax::{print_formula, Formula};

pub use branch::{expand_step, is_closed, Branch, Classes, Expansion};
pub use extract::extract_model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("no rule applies: the branch is saturated")]
    NoApplicableRule,
    #[error("budget exhausted: {0}")]
    BudgetExhausted(&'static str),
    #[error("countermodel extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("sequent has free variables: {0}")]
    OpenSequent(String),
    #[error("budget must be positive")]
    EmptyBudget,
}

/// Per-branch limits, plus a limit on the size of the whole tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_gamma: usize,
    pub max_fresh: usize,
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_gamma: 32,
            max_fresh: 8,
            max_nodes: 20_000,
        }
    }
}

/// A node of a tableau: the rule applied to the branch ending here, or how
/// the branch ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableauNode {
    pub rule: String,
    pub principal: Option<String>,
    pub added: Vec<String>,
    pub closed_by: Option<String>,
    pub children: Vec<TableauNode>,
}

impl TableauNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TableauNode::size).sum::<usize>()
    }

    /// Indented text tree, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let _ = write!(out, "{}[{}]", "  ".repeat(depth), self.rule);
        if let Some(p) = &self.principal {
            let _ = write!(out, " {p}");
        }
        if !self.added.is_empty() {
            let _ = write!(out, "  ⊢ {}", self.added.join(", "));
        }
        if let Some(c) = &self.closed_by {
            let _ = write!(out, "  ✗ {c}");
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub nodes: usize,
    pub gamma_exhausted: bool,
    pub fresh_exhausted: bool,
    pub node_limit_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauResult {
    /// Every branch closed.
    Proof(TableauNode),
    /// An open saturated branch and its verified term model.
    Countermodel {
        structure: Structure,
        assignment: Assignment,
        branch: Vec<Formula>,
    },
    Unknown(ResourceReport),
}

impl TableauResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            TableauResult::Proof(_) => "proof",
            TableauResult::Countermodel { .. } => "countermodel",
            TableauResult::Unknown(_) => "unknown",
        }
    }
}

/// The root branch for `Γ ⇒ Δ`.
pub fn root_branch(q: &Sequent) -> Branch {
    Branch::new(
        q.ante
            .iter()
            .cloned()
            .chain(q.succ.iter().map(|a| Formula::not(a.clone()))),
    )
}

enum Outcome {
    Closed(TableauNode),
    Open(Branch),
    Unknown(TableauNode),
}

struct Search<'a> {
    budget: &'a Budget,
    nodes: AtomicUsize,
    gamma_exhausted: AtomicUsize,
    fresh_exhausted: AtomicUsize,
    node_limit: AtomicUsize,
}

fn leaf(rule: &str, closed_by: Option<String>) -> TableauNode {
    TableauNode {
        rule: rule.into(),
        principal: None,
        added: Vec::new(),
        closed_by,
        children: Vec::new(),
    }
}

impl Search<'_> {
    fn explore(&self, b: Branch, jobs: usize) -> Outcome {
        if let Some(why) = b.closure() {
            return Outcome::Closed(leaf("closed", Some(why)));
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget.max_nodes {
            self.node_limit.fetch_add(1, Ordering::Relaxed);
            return Outcome::Unknown(leaf("node limit", None));
        }
        let exp = match expand_step(&b, self.budget) {
            Ok(exp) => exp,
            Err(TableauError::NoApplicableRule) => return Outcome::Open(b),
            Err(TableauError::BudgetExhausted(what)) => {
                let flag = if what.starts_with('γ') {
                    &self.gamma_exhausted
                } else {
                    &self.fresh_exhausted
                };
                flag.fetch_add(1, Ordering::Relaxed);
                return Outcome::Unknown(leaf(&format!("{what} exhausted"), None));
            }
            Err(e) => unreachable!("expand_step: {e}"),
        };
        let Expansion {
            rule,
            principal,
            term,
            children,
        } = exp;
        let label = match term {
            Some(t) => format!("{rule} @ {t}"),
            None => rule.to_string(),
        };
        let mut node = TableauNode {
            rule: label,
            principal: Some(print_formula(&principal)),
            added: Vec::new(),
            closed_by: None,
            children: Vec::new(),
        };
        let with_added = |mut n: TableauNode, added: &[Formula]| {
            n.added = added.iter().map(print_formula).collect();
            n
        };
        // a single child continues this node's line
        if children.len() == 1 {
            let (added, child) = children.into_iter().next().unwrap();
            node.added = added.iter().map(print_formula).collect();
            return match self.explore(child, jobs) {
                Outcome::Closed(n) => {
                    node.children.push(n);
                    Outcome::Closed(node)
                }
                Outcome::Unknown(n) => {
                    node.children.push(n);
                    Outcome::Unknown(node)
                }
                open => open,
            };
        }
        let outcomes: Vec<(Vec<Formula>, Outcome)> = if jobs > 1 {
            let per = (jobs / children.len()).max(1);
            std::thread::scope(|scope| {
                let handles: Vec<_> = children
                    .into_iter()
                    .map(|(added, child)| scope.spawn(move || (added, self.explore(child, per))))
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            })
        } else {
            let mut out = Vec::new();
            for (added, child) in children {
                let o = self.explore(child, 1);
                let open = matches!(o, Outcome::Open(_));
                out.push((added, o));
                if open {
                    break;
                }
            }
            out
        };
        let mut unknown = false;
        for (added, o) in outcomes {
            match o {
                Outcome::Open(b) => return Outcome::Open(b),
                Outcome::Closed(n) => node.children.push(with_added(n, &added)),
                Outcome::Unknown(n) => {
                    unknown = true;
                    node.children.push(with_added(n, &added));
                }
            }
        }
        if unknown {
            Outcome::Unknown(node)
        } else {
            Outcome::Closed(node)
        }
    }
}

/// Tries to close a tableau for `q`; single-threaded and deterministic.
pub fn prove(q: &Sequent, budget: &Budget) -> Result<TableauResult, TableauError> {
    prove_parallel(q, budget, 1)
}

/// Like [`prove`], exploring sibling branches on up to `jobs` threads. The
/// verdict and witness agree with [`prove`] unless the node limit is hit.
pub fn prove_parallel(q: &Sequent, budget: &Budget, jobs: usize) -> Result<TableauResult, TableauError> {
    if budget.max_gamma == 0 || budget.max_fresh == 0 || budget.max_nodes == 0 {
        return Err(TableauError::EmptyBudget);
    }
    let free: Vec<String> = q.formulas().flat_map(|a| a.free_vars()).collect();
    if !free.is_empty() {
        return Err(TableauError::OpenSequent(free.join(", ")));
    }
    let root = root_branch(q);
    let mut root_node = leaf("root", None);
    root_node.added = root.formulas.iter().map(print_formula).collect();
    let search = Search {
        budget,
        nodes: AtomicUsize::new(0),
        gamma_exhausted: AtomicUsize::new(0),
        fresh_exhausted: AtomicUsize::new(0),
        node_limit: AtomicUsize::new(0),
    };
    match search.explore(root, jobs.max(1)) {
        Outcome::Closed(n) => {
            root_node.children.push(n);
            Ok(TableauResult::Proof(root_node))
        }
        Outcome::Open(b) => {
            let (structure, assignment) = extract_model(&b)?;
            if satisfies_sequent(&structure, &assignment, q) != Ok(false) {
                return Err(TableauError::ExtractionFailed("model does not falsify the sequent".into()));
            }
            Ok(TableauResult::Countermodel {
                structure,
                assignment,
                branch: b.formulas,
            })
        }
        Outcome::Unknown(_) => Ok(TableauResult::Unknown(ResourceReport {
            nodes: search.nodes.load(Ordering::Relaxed),
            gamma_exhausted: search.gamma_exhausted.load(Ordering::Relaxed) > 0,
            fresh_exhausted: search.fresh_exhausted.load(Ordering::Relaxed) > 0,
            node_limit_hit: search.node_limit.load(Ordering::Relaxed) > 0,
        })),
    }
}
