use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use modal_core::closure::{closure_with, Cond6Reading, Signature};
use modal_core::construction::{
    audit_all, build_standard_model, build_witness_model, default_depth, AtomTable, Options,
    RelationReading,
};
use modal_core::proof::{check_proof, ProofScript, SystemId};
use modal_core::semantics::{truth_set, FrameClass, KripkeModel};
use modal_core::solver::{
    brute_force_sat, closure_sat, compare_engines, decide_valid, formula_corpus, CorpusSpec,
    Validity, Verdict, MAX_BOUND,
};
use modal_core::syntax::{parse, Formula, Index};

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const USAGE: u8 = 2;
const UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "modal", version)]
#[command(about = "Multi-agent modal logics with intersection and transitive-closure modalities")]
struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SigArgs {
    /// Logic: CK, CD, CT, CB, CS4 or CS5 (AX_ prefix optional)
    #[arg(short, long, default_value = "CK")]
    logic: SystemId,

    /// The formula α
    #[arg(short, long)]
    formula: String,

    /// Index set ι, e.g. `1,2`; defaults to the indices of α
    #[arg(short, long, value_delimiter = ',')]
    iota: Option<Vec<u32>>,

    /// Read closure condition 6 literally (I ⊂ J) instead of J ∩ I ≠ ∅
    #[arg(long)]
    literal_cond6: bool,

    /// Use the relation clauses exactly as displayed for S4 and S5
    #[arg(long)]
    literal_relation: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical rendering of a formula
    Parse {
        #[arg(short, long)]
        formula: String,
    },
    /// Evaluate a formula at every state of a model file
    CheckModel {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        formula: String,
    },
    /// Check a proof script in a Hilbert system
    Prove {
        /// System, e.g. AX_K, AX_T∩ (or AX_T_CAP), AX_CS5
        #[arg(short, long)]
        system: SystemId,
        /// Proof script file
        #[arg(short, long)]
        proof: PathBuf,
    },
    /// List the closure of a signature
    Closure(SigArgs),
    /// List the atoms of a signature
    Atoms(SigArgs),
    /// Emit the standard model as model JSON
    Build {
        #[command(flatten)]
        sig: SigArgs,
        /// Depth; defaults to the modal depth of α plus one
        #[arg(short, long)]
        depth: Option<usize>,
        /// Keep only the witness steps below each root
        #[arg(long)]
        witness: bool,
    },
    /// Run the canonicity, standardness, truth and existence audits
    Audit {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(short, long)]
        depth: Option<usize>,
    },
    /// Decide satisfiability
    Sat {
        #[arg(short, long, default_value = "CK")]
        logic: SystemId,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        depth: Option<usize>,
        /// Largest model the oracle tries
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// closure, oracle, or auto (closure, then oracle if unknown)
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// Decide validity with both engines
    Valid {
        #[arg(short, long, default_value = "CK")]
        logic: SystemId,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Compare the closure pipeline and the oracle on an exhaustive corpus
    OracleCompare {
        #[arg(short, long, value_delimiter = ',', default_value = "CK,CT,CB")]
        logic: Vec<SystemId>,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Largest connective count in the corpus
        #[arg(long, default_value_t = 4)]
        connectives: usize,
        /// Largest modal depth in the corpus
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        indices: Vec<u32>,
    },
}

/// Bad input: exit code 2.
struct Usage(String);

fn usage(e: impl Display) -> Usage {
    Usage(e.to_string())
}

fn formula(text: &str) -> Result<Formula, Usage> {
    parse(text).map_err(|e| Usage(format!("cannot parse `{text}`: {e}")))
}

/// The formula must lie in the system's language.
fn solver_input(logic: SystemId, text: &str) -> Result<Formula, Usage> {
    let f = formula(text)?;
    if f.level() > logic.level {
        return Err(Usage(format!(
            "{} is outside the language of {logic}",
            f.render()
        )));
    }
    Ok(f)
}

impl SigArgs {
    fn table(&self) -> Result<AtomTable, Usage> {
        let alpha = formula(&self.formula)?;
        let iota = match &self.iota {
            Some(v) => Index::new(v.iter().copied()).map_err(usage)?,
            None => alpha.index_union().unwrap_or_else(|| Index::singleton(1)),
        };
        let sig = Signature::new(self.logic, alpha, iota).map_err(usage)?;
        let options = Options {
            cond6: if self.literal_cond6 {
                Cond6Reading::Literal
            } else {
                Cond6Reading::Repaired
            },
            relation: if self.literal_relation {
                RelationReading::Literal
            } else {
                RelationReading::Repaired
            },
            ..Options::default()
        };
        Ok(AtomTable::with_options(&sig, options))
    }
}

/// Write errors (a closed pipe, say) are ignored.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        out(&format!(
            "{}\n",
            serde_json::to_string_pretty(&value).expect("serializable")
        ));
    } else {
        out(&text());
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Sat(w) => format!(
            "sat at {}\n{}\n",
            w.model().state_name(w.state()),
            w.model().to_json_pretty()
        ),
        Verdict::Unsat(e) => format!(
            "unsat ({})\n",
            serde_json::to_string(e).expect("serializable")
        ),
        Verdict::Unknown(r) => format!("unknown: {r}\n"),
    }
}

fn run(cli: Cli) -> Result<u8, Usage> {
    let json = cli.json;
    match cli.command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            emit(
                json,
                json!({ "formula": f.render(), "level": f.level(), "modal_depth": f.modal_depth() }),
                || format!("{}\n", f.render()),
            );
            Ok(OK)
        }
        Command::CheckModel {
            model,
            formula: text,
        } => {
            let data = fs::read_to_string(&model)
                .map_err(|e| Usage(format!("{}: {e}", model.display())))?;
            let m = KripkeModel::from_json(&data).map_err(usage)?;
            let f = formula(&text)?;
            let truth = truth_set(&m, &f).map_err(usage)?;
            let rows: Vec<(String, bool)> = (0..m.num_states())
                .map(|s| (m.state_name(s).to_string(), truth.contains(s)))
                .collect();
            emit(
                json,
                json!({
                    "formula": f.render(),
                    "states": rows.iter().map(|(s, h)| json!({ "state": s, "holds": h })).collect::<Vec<_>>(),
                }),
                || rows.iter().map(|(s, h)| format!("{s}: {h}\n")).collect(),
            );
            Ok(OK)
        }
        Command::Prove { system, proof } => {
            let text = fs::read_to_string(&proof)
                .map_err(|e| Usage(format!("{}: {e}", proof.display())))?;
            let outcome = ProofScript::parse(&text)
                .map_err(|e| e.to_string())
                .and_then(|s| {
                    check_proof(system, &s)
                        .map(|()| s.lines.len())
                        .map_err(|e| e.to_string())
                });
            let code = if outcome.is_ok() { OK } else { VIOLATION };
            emit(
                json,
                match &outcome {
                    Ok(n) => json!({ "system": system.to_string(), "ok": true, "lines": n }),
                    Err(e) => json!({ "system": system.to_string(), "ok": false, "error": e }),
                },
                || match &outcome {
                    Ok(n) => format!("ok: {n} line(s) checked in {system}\n"),
                    Err(e) => format!("rejected in {system}: {e}\n"),
                },
            );
            Ok(code)
        }
        Command::Closure(sig) => {
            let table = sig.table()?;
            let cl = closure_with(table.signature(), table.options().cond6);
            let members = cl.rendered();
            emit(
                json,
                json!({ "signature": cl.signature(), "size": members.len(), "members": members }),
                || members.iter().map(|m| format!("{m}\n")).collect(),
            );
            Ok(OK)
        }
        Command::Atoms(sig) => {
            let table = sig.table()?;
            let atoms: Vec<Vec<String>> = (0..table.len())
                .map(|a| table.members(a).iter().map(Formula::render).collect())
                .collect();
            emit(
                json,
                json!({
                    "signature": table.signature(),
                    "coherent": table.coherent_count(),
                    "eliminated": table.eliminated().len(),
                    "atoms": atoms,
                }),
                || {
                    atoms
                        .iter()
                        .enumerate()
                        .map(|(k, a)| format!("{k}: {{{}}}\n", a.join(", ")))
                        .collect()
                },
            );
            Ok(OK)
        }
        Command::Build {
            sig,
            depth,
            witness,
        } => {
            let table = sig.table()?;
            let depth = depth.unwrap_or_else(|| default_depth(&table));
            let model = if witness {
                let alpha = table.signature().alpha().clone();
                let root = *table
                    .atoms_with(&alpha)
                    .first()
                    .ok_or_else(|| Usage("no atom contains α".into()))?;
                build_witness_model(&table, root, depth)
            } else {
                build_standard_model(&table, depth)
            };
            out(&format!("{}\n", model.model().to_json_pretty()));
            Ok(OK)
        }
        Command::Audit { sig, depth } => {
            let table = sig.table()?;
            let depth = depth.unwrap_or_else(|| default_depth(&table));
            let m = build_standard_model(&table, depth);
            let report = audit_all(&table, &m);
            out(&format!(
                "{}\n",
                serde_json::to_string_pretty(&report).expect("serializable")
            ));
            Ok(if report.passed() { OK } else { VIOLATION })
        }
        Command::Sat {
            logic,
            formula: text,
            depth,
            bound,
            engine,
        } => {
            let f = solver_input(logic, &text)?;
            check_bound(bound)?;
            let v = match engine.as_str() {
                "closure" => closure_sat(&f, logic.frame, depth),
                "oracle" => brute_force_sat(&f, logic.frame, bound),
                "auto" => match closure_sat(&f, logic.frame, depth) {
                    Verdict::Unknown(_) => brute_force_sat(&f, logic.frame, bound),
                    v => v,
                },
                other => return Err(Usage(format!("unknown engine `{other}`"))),
            };
            emit(json, v.to_json(), || verdict_text(&v));
            Ok(if v.is_definite() { OK } else { UNKNOWN })
        }
        Command::Valid {
            logic,
            formula: text,
            depth,
            bound,
        } => {
            let f = solver_input(logic, &text)?;
            check_bound(bound)?;
            let v = decide_valid(&f, logic.frame, depth, bound);
            emit(json, v.to_json(), || match &v {
                Validity::Valid => "valid\n".into(),
                Validity::Invalid(w) => format!(
                    "invalid: countermodel at {}\n{}\n",
                    w.model().state_name(w.state()),
                    w.model().to_json_pretty()
                ),
                Validity::Unknown { closure, oracle } => {
                    format!(
                        "unknown (closure: {}, oracle: {})\n",
                        closure.label(),
                        oracle.label()
                    )
                }
            });
            Ok(if matches!(v, Validity::Unknown { .. }) {
                UNKNOWN
            } else {
                OK
            })
        }
        Command::OracleCompare {
            logic,
            bound,
            connectives,
            max_depth,
            indices,
        } => {
            check_bound(bound)?;
            let spec = CorpusSpec {
                max_connectives: connectives,
                max_depth,
                indices,
                props: vec!["p".into()],
            };
            let corpus = formula_corpus(&spec);
            let frames: Vec<FrameClass> = logic.iter().map(|l| l.frame).collect();
            let reports: Vec<_> = frames
                .iter()
                .map(|&c| compare_engines(&corpus, c, bound))
                .collect();
            let passed = reports.iter().all(|r| r.passed());
            emit(json, json!({ "corpus": spec, "reports": reports }), || {
                let mut out = String::new();
                for r in &reports {
                    out += &format!(
                        "C{}: {} formulas, {} both definite ({} sat, {} unsat), unknown closure {} oracle {}, {} disagreement(s)\n",
                        r.frame.map(|c| c.name()).unwrap_or("?"),
                        r.formulas,
                        r.both_definite,
                        r.sat,
                        r.unsat,
                        r.closure_unknown,
                        r.oracle_unknown,
                        r.disagreements.len()
                    );
                    for d in &r.disagreements {
                        out += &format!(
                            "  {}: closure {} oracle {}\n",
                            d.formula, d.closure, d.oracle
                        );
                    }
                }
                out
            });
            Ok(if passed { OK } else { VIOLATION })
        }
    }
}

fn check_bound(bound: usize) -> Result<(), Usage> {
    if (1..=MAX_BOUND).contains(&bound) {
        Ok(())
    } else {
        Err(Usage(format!("--bound must be between 1 and {MAX_BOUND}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
