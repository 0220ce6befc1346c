//! The `cpfi` command line.
//!
//! Exit codes: 0 success / valid, 1 refuted / countermodel found, 2 unknown
//! or budget exhausted, 3 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cutelim::fixtures::{cut_fixtures, stuck_fixtures};
use crate::cutelim::{eliminate_cuts, eliminate_cuts_traced, CutElimError};
use crate::kernel::{check_proof, derivation_corpus, parse_proof, print_proof, ProofTree, Sequent};
use crate::semantics::{
    find_countermodel_parallel, non_derivable_corpus, parse_model, print_model, satisfies,
    satisfies_sequent, Assignment, Structure,
};
use crate::syntax::{parse_formula_in, parse_sequent_parts, print_formula, Signature};
use crate::tableau::{prove_parallel, Budget, TableauResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "cpfi", version, about = "Positive free logic with a binary description quantifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report to FILE instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for model enumeration and branch exploration.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula or a sequent (`A, B |- C`) and print it back.
    Parse { text: String },
    /// Check a proof file.
    Check { file: PathBuf },
    /// Search for a closed tableau.
    Prove {
        sequent: String,
        #[arg(long, default_value_t = Budget::default().max_gamma)]
        max_gamma: usize,
        #[arg(long, default_value_t = Budget::default().max_fresh)]
        max_fresh: usize,
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        max_nodes: usize,
    },
    /// Eliminate all cuts from a proof file.
    Cutelim {
        file: PathBuf,
        /// Log every reduction step.
        #[arg(long)]
        trace: bool,
    },
    /// Search all finite structures up to the given outer size.
    Countermodel {
        sequent: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Evaluate a closed formula or sequent in a model file.
    Eval { model: PathBuf, text: String },
    /// Check the golden derivations, cut fixtures and non-derivability claims.
    Corpus {
        /// Run only the item with this name.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Also write each golden derivation to DIR/<name>.proof.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// What a command produced: exit code, text report and JSON report.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Self {
        Report {
            code,
            text: text.into(),
            json,
        }
    }

    fn input_error(command: &str, msg: impl std::fmt::Display) -> Self {
        let msg = msg.to_string();
        Report::new(
            EXIT_INPUT,
            format!("error: {msg}\n"),
            json!({ "command": command, "exit": EXIT_INPUT, "error": msg }),
        )
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn sequent(text: &str) -> Result<Sequent, String> {
    let (a, s) = parse_sequent_parts(text, &mut Signature::new()).map_err(|e| e.to_string())?;
    Ok(Sequent::new(a, s))
}

fn load_proof(path: &PathBuf) -> Result<ProofTree, String> {
    let text = read(path)?;
    parse_proof(&text, &mut Signature::new()).map_err(|e| e.to_string())
}

fn model_text(m: &Structure, s: &Assignment) -> String {
    print_model(m, s)
}

fn cmd_parse(text: &str) -> Report {
    let mut sig = Signature::new();
    if text.contains("|-") || text.contains('⇒') {
        return match sequent(text) {
            Ok(q) => {
                let printed = q.to_string();
                Report::new(
                    EXIT_OK,
                    format!("{printed}\n"),
                    json!({ "command": "parse", "exit": EXIT_OK, "kind": "sequent", "printed": printed }),
                )
            }
            Err(e) => Report::input_error("parse", e),
        };
    }
    match parse_formula_in(text, &mut sig, &[]) {
        Ok(a) => {
            let printed = print_formula(&a);
            Report::new(
                EXIT_OK,
                format!("{printed}\n"),
                json!({
                    "command": "parse",
                    "exit": EXIT_OK,
                    "kind": "formula",
                    "printed": printed,
                    "depth": a.depth(),
                }),
            )
        }
        Err(e) => Report::input_error("parse", e),
    }
}

fn cmd_check(file: &PathBuf) -> Report {
    let p = match load_proof(file) {
        Ok(p) => p,
        Err(e) => return Report::input_error("check", e),
    };
    let base = json!({
        "command": "check",
        "file": file.display().to_string(),
        "conclusion": p.conclusion.to_string(),
        "nodes": p.nodes().len(),
        "height": p.height(),
    });
    let mut j = base;
    match check_proof(&p) {
        Ok(()) => {
            j["exit"] = json!(EXIT_OK);
            j["ok"] = json!(true);
            Report::new(EXIT_OK, "OK\n", j)
        }
        Err(e) => {
            j["exit"] = json!(EXIT_REFUTED);
            j["ok"] = json!(false);
            j["error"] = json!(e.to_string());
            Report::new(EXIT_REFUTED, format!("FAIL {e}\n"), j)
        }
    }
}

fn cmd_prove(text: &str, budget: Budget, jobs: usize) -> Report {
    let q = match sequent(text) {
        Ok(q) => q,
        Err(e) => return Report::input_error("prove", e),
    };
    let r = match prove_parallel(&q, &budget, jobs) {
        Ok(r) => r,
        Err(e) => return Report::input_error("prove", e),
    };
    let mut j = json!({
        "command": "prove",
        "sequent": q.to_string(),
        "verdict": r.verdict(),
        "budget": budget,
    });
    let (code, text) = match r {
        TableauResult::Proof(t) => {
            let text = format!("closed tableau ({} nodes)\n{}", t.size(), t.render());
            j["tableau"] = serde_json::to_value(&t).expect("serializable");
            (EXIT_OK, text)
        }
        TableauResult::Countermodel {
            structure,
            assignment,
            branch,
        } => {
            let model = model_text(&structure, &assignment);
            j["model"] = json!(model);
            j["branch"] = json!(branch.iter().map(print_formula).collect::<Vec<_>>());
            (EXIT_REFUTED, format!("countermodel from an open branch\n{model}"))
        }
        TableauResult::Unknown(report) => {
            j["report"] = serde_json::to_value(&report).expect("serializable");
            (
                EXIT_UNKNOWN,
                format!(
                    "unknown after {} nodes (gamma exhausted: {}, fresh exhausted: {}, node limit: {})\n",
                    report.nodes, report.gamma_exhausted, report.fresh_exhausted, report.node_limit_hit
                ),
            )
        }
    };
    j["exit"] = json!(code);
    Report::new(code, text, j)
}

fn cmd_cutelim(file: &PathBuf, trace: bool) -> Report {
    let p = match load_proof(file) {
        Ok(p) => p,
        Err(e) => return Report::input_error("cutelim", e),
    };
    match eliminate_cuts_traced(&p) {
        Ok((q, steps)) => {
            let proof = print_proof(&q);
            let mut text = String::new();
            if trace {
                for s in &steps {
                    text.push_str(&format!("; {:<16} degree {} {}\n", s.case, s.degree, s.cut_formula));
                }
            }
            text.push_str(&proof);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let mut j = json!({
                "command": "cutelim",
                "exit": EXIT_OK,
                "ok": true,
                "proof": proof,
                "nodes": q.nodes().len(),
            });
            if trace {
                j["trace"] = serde_json::to_value(&steps).expect("serializable");
            }
            Report::new(EXIT_OK, text, j)
        }
        Err(CutElimError::Invalid(e)) => Report::input_error("cutelim", format!("proof does not check: {e}")),
        Err(e) => Report::new(
            EXIT_UNKNOWN,
            format!("cut elimination stopped: {e}\n"),
            json!({ "command": "cutelim", "exit": EXIT_UNKNOWN, "ok": false, "error": e.to_string() }),
        ),
    }
}

fn cmd_countermodel(text: &str, max_size: usize, jobs: usize) -> Report {
    let q = match sequent(text) {
        Ok(q) => q,
        Err(e) => return Report::input_error("countermodel", e),
    };
    match find_countermodel_parallel(&q, &Signature::new(), max_size, jobs) {
        Ok(Some((m, s))) => {
            let model = model_text(&m, &s);
            Report::new(
                EXIT_REFUTED,
                format!("countermodel with outer size {}\n{model}", m.outer),
                json!({
                    "command": "countermodel",
                    "exit": EXIT_REFUTED,
                    "found": true,
                    "outer": m.outer,
                    "model": model,
                }),
            )
        }
        Ok(None) => Report::new(
            EXIT_OK,
            format!("no countermodel with outer size <= {max_size}\n"),
            json!({ "command": "countermodel", "exit": EXIT_OK, "found": false, "max_size": max_size }),
        ),
        Err(e) => Report::input_error("countermodel", e),
    }
}

fn cmd_eval(model: &PathBuf, text: &str) -> Report {
    let (m, s) = match read(model).and_then(|t| parse_model(&t).map_err(|e| e.to_string())) {
        Ok(ms) => ms,
        Err(e) => return Report::input_error("eval", e),
    };
    let value = if text.contains("|-") || text.contains('⇒') {
        sequent(text).and_then(|q| satisfies_sequent(&m, &s, &q).map_err(|e| e.to_string()))
    } else {
        let vars: Vec<String> = s.0.keys().cloned().collect();
        parse_formula_in(text, &mut Signature::new(), &vars)
            .map_err(|e| e.to_string())
            .and_then(|a| satisfies(&m, &s, &a).map_err(|e| e.to_string()))
    };
    match value {
        Ok(v) => {
            let code = if v { EXIT_OK } else { EXIT_REFUTED };
            Report::new(
                code,
                format!("{v}\n"),
                json!({ "command": "eval", "exit": code, "value": v }),
            )
        }
        Err(e) => Report::input_error("eval", e),
    }
}

struct Item {
    kind: &'static str,
    name: String,
    ok: bool,
    detail: String,
}

fn corpus_items(only: Option<&str>, max_size: usize, jobs: usize) -> Vec<Item> {
    let wanted = |name: &str| only.is_none_or(|o| o == name);
    let mut items = Vec::new();
    for (name, e) in derivation_corpus() {
        if !wanted(name) {
            continue;
        }
        let (ok, detail) = match check_proof(&e.proof) {
            Ok(()) => (true, e.proof.conclusion.to_string()),
            Err(err) => (false, err.to_string()),
        };
        items.push(Item {
            kind: "derivation",
            name: name.to_string(),
            ok,
            detail,
        });
    }
    for fx in cut_fixtures().into_iter().chain(stuck_fixtures()) {
        if !wanted(&fx.name) {
            continue;
        }
        let (ok, detail) = match (eliminate_cuts(&fx.proof), fx.expect_stuck) {
            (Ok(q), false) => {
                let good = check_proof(&q).is_ok() && q.is_cut_free() && q.conclusion == fx.proof.conclusion;
                (good, format!("{} -> {} nodes, cut-free", fx.proof.nodes().len(), q.nodes().len()))
            }
            (Err(e @ CutElimError::StuckAtomicCut { .. }), true) => (true, format!("known gap: {e}")),
            (Ok(_), true) => (false, "expected the known atomic-cut gap, but elimination succeeded".into()),
            (Err(e), _) => (false, e.to_string()),
        };
        items.push(Item {
            kind: "cut-elimination",
            name: fx.name,
            ok,
            detail,
        });
    }
    for nd in non_derivable_corpus() {
        if !wanted(nd.name) {
            continue;
        }
        let result = sequent(nd.sequent).and_then(|q| {
            find_countermodel_parallel(&q, &Signature::new(), max_size, jobs)
                .map_err(|e| e.to_string())
                .map(|r| (q, r))
        });
        let (ok, detail) = match result {
            Ok((q, Some((m, s)))) => {
                let verified = satisfies_sequent(&m, &s, &q) == Ok(false);
                (
                    verified && m.outer <= nd.witness_size,
                    format!("countermodel with outer size {}", m.outer),
                )
            }
            Ok((_, None)) => (false, format!("no countermodel up to size {max_size}")),
            Err(e) => (false, e),
        };
        items.push(Item {
            kind: "non-derivable",
            name: nd.name.to_string(),
            ok,
            detail,
        });
    }
    items
}

fn cmd_corpus(name: Option<&str>, max_size: usize, export: Option<&PathBuf>, jobs: usize) -> Report {
    if let Some(dir) = export {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return Report::input_error("corpus", format!("{}: {e}", dir.display()));
        }
        for (n, e) in derivation_corpus() {
            let path = dir.join(format!("{}.proof", n.to_lowercase()));
            let body = format!("; {}\n{}\n", e.description, print_proof(&e.proof));
            if let Err(err) = std::fs::write(&path, body) {
                return Report::input_error("corpus", format!("{}: {err}", path.display()));
            }
        }
    }
    let items = corpus_items(name, max_size, jobs);
    if items.is_empty() {
        return Report::input_error("corpus", format!("no corpus item named `{}`", name.unwrap_or("")));
    }
    let failed = items.iter().filter(|i| !i.ok).count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_REFUTED };
    let mut text = String::new();
    for i in &items {
        let mark = if i.ok { "pass" } else { "FAIL" };
        text.push_str(&format!("{mark}  {:<16} {:<44} {}\n", i.kind, i.name, i.detail));
    }
    text.push_str(&format!("{} passed, {failed} failed\n", items.len() - failed));
    let json_items: Vec<Value> = items
        .iter()
        .map(|i| json!({ "kind": i.kind, "name": i.name, "ok": i.ok, "detail": i.detail }))
        .collect();
    Report::new(
        code,
        text,
        json!({
            "command": "corpus",
            "exit": code,
            "passed": items.len() - failed,
            "failed": failed,
            "items": json_items,
        }),
    )
}

fn dispatch(cli: &Cli) -> Report {
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Parse { text } => cmd_parse(text),
        Command::Check { file } => cmd_check(file),
        Command::Prove {
            sequent,
            max_gamma,
            max_fresh,
            max_nodes,
        } => cmd_prove(
            sequent,
            Budget {
                max_gamma: *max_gamma,
                max_fresh: *max_fresh,
                max_nodes: *max_nodes,
            },
            jobs,
        ),
        Command::Cutelim { file, trace } => cmd_cutelim(file, *trace),
        Command::Countermodel { sequent, max_size } => cmd_countermodel(sequent, *max_size, jobs),
        Command::Eval { model, text } => cmd_eval(model, text),
        Command::Corpus {
            name,
            max_size,
            export,
        } => cmd_corpus(name.as_deref(), *max_size, export.as_ref(), jobs),
    }
}

/// Runs one invocation, writing the report to `out` (or the `-o` file).
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let report = dispatch(&cli);
    let body = match cli.format {
        Format::Text => report.text,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable")),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = out.write_all(body.as_bytes());
        }
    }
    report.code
}
