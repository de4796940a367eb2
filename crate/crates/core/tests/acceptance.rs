//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p modal-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{
    audit_corpus, delete_line, load_script, matrix_power_closure, mutations, random_index,
    random_instance,
};
use modal_core::construction::{
    audit_all, audit_canonicity, audit_existence, audit_standardness, audit_truth,
    build_standard_model, default_depth, AtomTable,
};
use modal_core::proof::{assemble_system, check_proof, AxiomSchema, SystemId};
use modal_core::semantics::{
    compose_relation, frame_check, random_model, satisfies, valid_on_model, FrameClass, Mode,
    Relation,
};
use modal_core::solver::{
    brute_force_sat, compare_engines, decide_valid, formula_corpus, CorpusSpec, Validity, Verdict,
};
use modal_core::syntax::{parse, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DUMP_ENV: &str = "MODAL_ACCEPTANCE_DUMP";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn soundness_sweep() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut evaluations = 0usize;
    for id in SystemId::all() {
        let sys = assemble_system(id);
        for &name in &sys.axioms {
            let schema = AxiomSchema::get(name);
            for _ in 0..50 {
                let f = random_instance(&mut rng, &schema, 3);
                for _ in 0..200 {
                    let n = rng.gen_range(1..=5);
                    let density = rng.gen_range(0.1..0.6);
                    let m = random_model(&mut rng, id.frame, n, &[1, 2, 3], &["p", "q"], density);
                    ensure(valid_on_model(&m, &f).unwrap(), || {
                        format!("{id}: {name} instance {f} fails on {}", m.to_json())
                    })?;
                    evaluations += 1;
                }
            }
        }
    }
    Ok(format!(
        "{evaluations} instance/model pairs valid in {:.1?}",
        start.elapsed()
    ))
}

fn dcap_invalid() -> Outcome {
    let f = parse("[&1 2]p -> ~[&1 2]~p").unwrap();
    let states = match brute_force_sat(&Formula::neg(f.clone()), FrameClass::D, 2) {
        Verdict::Sat(w) => {
            ensure(
                frame_check(w.model(), FrameClass::D, &[1, 2]).unwrap(),
                || "not serial".into(),
            )?;
            ensure(!satisfies(w.model(), w.state(), &f).unwrap(), || {
                "formula holds".into()
            })?;
            w.model().num_states()
        }
        other => return Err(format!("oracle says {}", other.label())),
    };
    match decide_valid(&f, FrameClass::D, None, 2) {
        Validity::Invalid(w) => {
            ensure(!satisfies(w.model(), w.state(), &f).unwrap(), || {
                "countermodel satisfies f".into()
            })?;
            Ok(format!(
                "{states}-state serial countermodel; decide_valid invalid"
            ))
        }
        other => Err(format!("decide_valid says {}", other.label())),
    }
}

fn canonicity() -> Outcome {
    let corpus = audit_corpus();
    let logics: std::collections::BTreeSet<_> = corpus.iter().map(|s| s.frame()).collect();
    ensure(corpus.len() >= 10 && logics.len() == 6, || {
        "corpus too small".into()
    })?;
    for s in &corpus {
        let r = audit_canonicity(&AtomTable::new(s));
        ensure(r.passed(), || format!("{s}: {:?}", r.violations))?;
    }
    Ok(format!(
        "{} signatures over 6 logics, zero violations",
        corpus.len()
    ))
}

fn standardness() -> Outcome {
    let mut frontier = 0;
    for s in audit_corpus() {
        let t = AtomTable::new(&s);
        let r = audit_standardness(&build_standard_model(&t, default_depth(&t)));
        ensure(r.non_frontier == 0, || format!("{s}: {:?}", r.violations))?;
        if matches!(s.frame(), FrameClass::S4 | FrameClass::S5) {
            ensure(r.violations.is_empty(), || {
                format!("{s}: {:?}", r.violations)
            })?;
        }
        frontier += r.violations.len();
    }
    Ok(format!(
        "zero non-frontier violations ({frontier} at the frontier)"
    ))
}

fn has_ucl(f: &Formula) -> bool {
    f.subformulas()
        .iter()
        .any(|g| matches!(g, Formula::Ucl(..)))
}

fn truth() -> Outcome {
    let corpus = audit_corpus();
    let ucl = corpus.iter().filter(|s| has_ucl(s.alpha())).count();
    ensure(ucl >= 3, || format!("only {ucl} signatures with ⊎"))?;
    let mut checked = 0;
    for s in &corpus {
        let t = AtomTable::new(s);
        let r = audit_truth(&t, &build_standard_model(&t, default_depth(&t)));
        ensure(r.passed(), || format!("{s}: {:?}", r.mismatches))?;
        ensure(r.checked > 0, || format!("{s}: nothing checked"))?;
        checked += r.checked;
    }
    Ok(format!(
        "{checked} interior (state, formula) pairs agree; {ucl} signatures with ⊎"
    ))
}

fn existence() -> Outcome {
    let (mut cap, mut ucl) = (0, 0);
    for s in audit_corpus() {
        let t = AtomTable::new(&s);
        let r = audit_existence(&t, &build_standard_model(&t, default_depth(&t)));
        ensure(r.passed(), || format!("{s}: {:?}", r.violations))?;
        cap += r.checked_cap;
        ucl += r.checked_ucl;
    }
    ensure(cap > 0 && ucl > 0, || "a clause was never exercised".into())?;
    Ok(format!("{cap} ∩ and {ucl} ⊎ obligations witnessed"))
}

fn engine_agreement() -> Outcome {
    let start = Instant::now();
    let corpus = formula_corpus(&CorpusSpec::default());
    let mut parts = Vec::new();
    for frame in [FrameClass::K, FrameClass::T, FrameClass::B] {
        let r = compare_engines(&corpus, frame, 4);
        ensure(r.passed(), || {
            format!(
                "{frame}: {:?}",
                &r.disagreements[..r.disagreements.len().min(3)]
            )
        })?;
        parts.push(format!(
            "{frame} {}/{} definite",
            r.both_definite, r.formulas
        ));
    }
    Ok(format!(
        "zero disagreements; {} in {:.1?}",
        parts.join(", "),
        start.elapsed()
    ))
}

fn matrix(r: &Relation) -> Vec<Vec<bool>> {
    let n = r.num_states();
    (0..n)
        .map(|s| (0..n).map(|t| r.contains(s, t)).collect())
        .collect()
}

fn closure_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..100 {
        let n = rng.gen_range(1..=8);
        let density = rng.gen_range(0.05..0.5);
        let m = random_model(&mut rng, FrameClass::K, n, &[1, 2, 3], &[], density);
        let idx = random_index(&mut rng, 3);
        let ucl = compose_relation(&m, &Mode::Ucl(idx.clone())).unwrap();
        let mut union = Relation::empty(n);
        for i in idx.iter() {
            union = union.union(m.relation(i).unwrap());
        }
        ensure(
            matrix(&ucl) == matrix_power_closure(&matrix(&union)),
            || format!("family {k}, index {idx}: {}", m.to_json()),
        )?;
    }
    Ok("100 random families match the matrix-power closure".into())
}

fn proof_corpus() -> Outcome {
    let corpus = [
        ("t_ucl.txt", SystemId::logic(FrameClass::T)),
        ("d_ucl.txt", SystemId::logic(FrameClass::D)),
        ("ucl_rule.txt", SystemId::logic(FrameClass::K)),
    ];
    let mut rejected = 0;
    for (name, id) in corpus {
        let script = load_script(name);
        ensure(check_proof(id, &script).is_ok(), || {
            format!("{name} does not check")
        })?;
        for k in 1..=script.lines.len() {
            let broken = delete_line(&script, k);
            ensure(check_proof(id, &broken).is_err(), || {
                format!("{name} without line {k} checks")
            })?;
            rejected += 1;
        }
        for (what, broken) in mutations(&script) {
            ensure(check_proof(id, &broken).is_err(), || {
                format!("{name} with {what} checks")
            })?;
            rejected += 1;
        }
    }
    let dcap = load_script("dcap.txt");
    ensure(
        check_proof(SystemId::logic(FrameClass::D), &dcap).is_err(),
        || "D∩ accepted".into(),
    )?;
    Ok(format!(
        "3 scripts check; {rejected} deletions and mutations rejected; D∩ rejected"
    ))
}

/// The `build` and `audit` JSON for every corpus signature.
fn dump() -> String {
    let mut out = String::new();
    for s in audit_corpus() {
        let t = AtomTable::new(&s);
        let m = build_standard_model(&t, default_depth(&t));
        out.push_str(&m.model().to_json_pretty());
        out.push('\n');
        out.push_str(&serde_json::to_string_pretty(&audit_all(&t, &m)).unwrap());
        out.push('\n');
    }
    out
}

fn determinism() -> Outcome {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(&exe)
            .env(DUMP_ENV, "1")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || "dump run failed".into())?;
        Ok(out.stdout)
    };
    let (a, b) = (run()?, run()?);
    ensure(!a.is_empty() && a == b, || {
        "outputs differ between runs".into()
    })?;
    ensure(a == dump().into_bytes(), || {
        "in-process output differs".into()
    })?;
    Ok(format!("{} bytes identical across two processes", a.len()))
}

fn main() -> ExitCode {
    if std::env::var_os(DUMP_ENV).is_some() {
        print!("{}", dump());
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 10] = [
        ("soundness sweep", soundness_sweep),
        ("D∩ invalidity", dcap_invalid),
        ("canonicity audit", canonicity),
        ("standardness audit", standardness),
        ("truth-lemma audit", truth),
        ("existence-lemma audit", existence),
        ("engine agreement", engine_agreement),
        ("transitive closure oracle", closure_oracle),
        ("proof-checker corpus", proof_corpus),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
