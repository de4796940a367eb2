use std::path::PathBuf;
use std::process::{Command, Output};

fn modal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modal"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn proof(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data/proofs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn parse_prints_canonical_form() {
    let o = modal(&["parse", "-f", "[&2 1]p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[&1 2]p");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(modal(&["parse", "-f", "[&1"]).status.code(), Some(2));
    // ⊎ is outside the base language
    assert_eq!(
        modal(&["sat", "-l", "K", "-f", "[+1]p"]).status.code(),
        Some(2)
    );
    assert_eq!(
        modal(&["sat", "-f", "p", "--bound", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn validity_verdicts() {
    let o = modal(&["valid", "-l", "CT", "-f", "[&1 2]p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid"));

    let o = modal(&["--json", "valid", "-l", "CD", "-f", "[&1 2]p -> ~[&1 2]~p"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["validity"], "invalid");
    assert!(v["countermodel"].is_object());
}

#[test]
fn unconfirmed_closure_verdict_exits_3() {
    let o = modal(&["sat", "--engine", "closure", "-d", "0", "-f", "~[1]p"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("unknown"));
}

#[test]
fn proof_scripts() {
    for (name, logic) in [
        ("t_ucl.txt", "CT"),
        ("d_ucl.txt", "CD"),
        ("ucl_rule.txt", "CK"),
    ] {
        let o = modal(&["prove", "-s", logic, "-p", &proof(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
    let o = modal(&["prove", "-s", "CD", "-p", &proof("dcap.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not an axiom"));
}

#[test]
fn built_models_can_be_checked() {
    let dir = std::env::temp_dir().join(format!("modal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    let o = modal(&["build", "-l", "CT", "-f", "[&1 2]p", "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let o = modal(&[
        "--json",
        "check-model",
        "-m",
        path.to_str().unwrap(),
        "-f",
        "[&1 2]p -> p",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states = v["states"].as_array().unwrap();
    assert!(!states.is_empty());
    assert!(states.iter().all(|s| s["holds"] == true));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn build_and_audit_are_reproducible() {
    for args in [
        ["build", "-l", "CB", "-f", "[1]~[2]p"],
        ["audit", "-l", "CD", "-f", "[+1 2]p"],
    ] {
        let a = modal(&args);
        let b = modal(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}
