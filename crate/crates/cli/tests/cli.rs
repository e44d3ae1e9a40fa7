use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(name)
}

fn epiq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epiq")).args(args).output().expect("run epiq")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL_SYSTEM: &str = r#"{"m_atoms":["x","y"],"q_atoms":["1","g"],"agents":["A"],
 "act":[["x","1","x"],["y","1","y"],["x","g","y"]],
 "mult":[["1","1","1"],["1","g","g"],["g","1","g"]],
 "unit":["1"],
 "appM":{"A":[["x","x"],["y","y"]]},
 "appQ":{"A":[["1","1"],["g","g"]]}}"#;

#[test]
fn golden_certificate_is_accepted() {
    let out = epiq(&["check", s(&golden("action_knowledge.proof.json")), "--base", s(&golden("empty.base.json"))]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["ok"], true);
}

#[test]
fn mitm_certificate_is_accepted() {
    let out = epiq(&["check", s(&golden("mitm.proof.json")), "--base", s(&golden("mitm.base.json"))]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn certificate_against_wrong_base_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let base: Value = serde_json::from_str(&fs::read_to_string(golden("mitm.base.json")).unwrap()).unwrap();
    let mut stripped = base.clone();
    stripped["axioms"] = Value::Array(vec![]);
    let path = dir.path().join("base.json");
    fs::write(&path, stripped.to_string()).unwrap();
    let out = epiq(&["check", s(&golden("mitm.proof.json")), "--base", s(&path)]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["ok"], false);
}

#[test]
fn prove_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let base = golden("empty.base.json");
    let out = epiq(&["prove", "boxM[A]([fQ[A](q)]m) |-M [q]boxM[A](m)", "--base", s(&base)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let proof = dir.path().join("proof.json");
    fs::write(&proof, &out.stdout).unwrap();
    let out = epiq(&["check", s(&proof), "--base", s(&base)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["conclusion"], "boxM[A]([fQ[A](q)]m) |-M [q]boxM[A](m)");
}

#[test]
fn prove_reports_failure() {
    let out = epiq(&["prove", "m |-M [q]m", "--base", s(&golden("empty.base.json")), "--depth", "4"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["found"], false);
}

#[test]
fn scenario_targets_agree_with_model_checker() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("muddy");
    let out = epiq(&["scenario", "muddy", "--n", "3", "--k", "2", "--out", s(&out_dir)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["state_model.json", "action_model.json", "system.json", "bindings.json", "base.json", "targets.json"] {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
    let targets: Vec<Value> = serde_json::from_str(&fs::read_to_string(out_dir.join("targets.json")).unwrap()).unwrap();
    assert!(targets.len() >= 4);
    let system = out_dir.join("system.json");
    let bindings = out_dir.join("bindings.json");
    for t in &targets {
        let out = epiq(&["mc", t["sequent"].as_str().unwrap(), "--system", s(&system), "--bindings", s(&bindings)]);
        let want = if t["expected"].as_bool().unwrap() { 0 } else { 1 };
        assert_eq!(code(&out), want, "{}", t["label"]);
    }
    let out = epiq(&["validate", s(&system)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn scenario_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&epiq(&["scenario", "lying", "--n", "2", "--out", s(d)])), 0);
    }
    for f in ["state_model.json", "action_model.json", "system.json", "bindings.json", "base.json", "targets.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, SMALL_SYSTEM).unwrap();
    let out = epiq(&["validate", s(&good)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["valid"], true);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, SMALL_SYSTEM.replace(r#"["1","g","g"],"#, "")).unwrap();
    let out = epiq(&["validate", s(&bad)]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    let laws: Vec<&str> = report["violations"].as_array().unwrap().iter().map(|v| v["law"].as_str().unwrap()).collect();
    assert!(laws.contains(&"MultLeftUnit"), "{laws:?}");
    assert!(report["violations"][0]["witness"].is_array());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&epiq(&["validate", s(&junk)])), 2);
    assert_eq!(code(&epiq(&["validate", s(&dir.path().join("missing.json"))])), 2);
    let out = epiq(&["prove", "m |-M (", "--base", s(&golden("empty.base.json"))]);
    assert_eq!(code(&out), 2);
    assert!(stdout_json(&out)["error"].is_string());
    assert_eq!(code(&epiq(&["scenario", "muddy", "--n", "9", "--k", "1", "--out", s(dir.path())])), 2);
    assert_eq!(code(&epiq(&["bogus"])), 2);
}

#[test]
fn pretty_format_is_the_same_document() {
    let base = golden("empty.base.json");
    let proof = golden("action_knowledge.proof.json");
    let pretty = epiq(&["check", s(&proof), "--base", s(&base), "--format", "pretty"]);
    let plain = epiq(&["check", s(&proof), "--base", s(&base)]);
    assert_eq!(stdout_json(&pretty), stdout_json(&plain));
    assert!(String::from_utf8_lossy(&pretty.stdout).lines().count() > 1);
}
