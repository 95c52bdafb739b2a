use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> (i32, Value, String) {
    run_env(dir, args, &[])
}

fn run_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> (i32, Value, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_roundgroups"));
    cmd.current_dir(dir).args(args).env_remove("ROUNDGROUPS_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    let stdout = String::from_utf8(stdout).unwrap();
    let payload = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (status.code().unwrap(), payload, String::from_utf8(stderr).unwrap())
}

fn raw_stdout(dir: &Path, args: &[&str]) -> Vec<u8> {
    Command::new(env!("CARGO_BIN_EXE_roundgroups")).current_dir(dir).args(args).output().unwrap().stdout
}

#[test]
fn group_files() {
    let dir = TempDir::new().unwrap();
    let (code, payload, stderr) = run(dir.path(), &["group", "pq", "--p", "3", "--q", "7", "--out", "pq21.json"]);
    assert_eq!(code, 0);
    assert_eq!(payload["order"], 21);
    assert_eq!(payload["nilpotent"], false);
    assert!(stderr.contains("nilpotent: false"));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("pq21.json")).unwrap()).unwrap();
    assert_eq!(file["table"].as_array().unwrap().len(), 441);

    let (code, payload, _) = run(dir.path(), &["group", "cyclic", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(payload["order"], 1);
    assert_eq!(payload["group"]["table"], serde_json::json!([0]));

    let (code, payload, _) = run(dir.path(), &["group", "symmetric", "--l", "9"]);
    assert_eq!(code, 3);
    assert_eq!(payload["error"]["kind"], "budget-exceeded");

    let (code, _, _) = run(dir.path(), &["group", "pq", "--p", "3", "--q", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn construct_and_check() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["group", "cyclic", "--n", "3", "--out", "z3.json"]);
    let (code, _, _) = run(d, &["group", "product", "z3.json", "z3.json", "--out", "z3xz3.json"]);
    assert_eq!(code, 0);

    let (code, payload, _) =
        run(d, &["cycle", "construct", "--mode", "totally-round", "--group", "z3xz3.json", "--out", "c9.json"]);
    assert_eq!(code, 0);
    assert_eq!(payload["cycle"]["entries"].as_array().unwrap().len(), 9);
    assert!(payload["trace"]["steps"].is_array());
    let (code, payload, _) = run(d, &["cycle", "check", "--k", "4", "--cycle", "c9.json"]);
    assert_eq!((code, payload["verdict"].as_str()), (0, Some("round")));

    let (code, _, _) = run(d, &["cycle", "construct", "--mode", "pq", "--p", "3", "--q", "7", "--out", "pq21.json"]);
    assert_eq!(code, 0);
    let (code, payload, _) = run(d, &["cycle", "check", "--k", "2", "--cycle", "pq21.json"]);
    assert_eq!((code, payload["verdict"].as_str()), (0, Some("round")));

    run(d, &["group", "cyclic", "--n", "2", "--out", "z2.json"]);
    run(d, &["cycle", "construct", "--mode", "ap", "--group", "z2.json", "--out", "z2ap.json"]);
    let (code, payload, _) = run(d, &["cycle", "check", "--k", "2", "--cycle", "z2ap.json"]);
    assert_eq!((code, payload["verdict"].as_str()), (1, Some("not-round")));

    let (code, payload, _) = run(d, &["cycle", "check", "--k", "3", "--cycle", "z2ap.json", "--strong", "1"]);
    assert_eq!(code, 0);
    assert_eq!(payload["verdict"], "round");
}

#[test]
fn not_nilpotent_construction_exits_one() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["group", "symmetric", "--l", "3", "--out", "s3.json"]);
    let (code, payload, _) = run(dir.path(), &["cycle", "construct", "--mode", "totally-round", "--group", "s3.json"]);
    assert_eq!(code, 1);
    assert_eq!(payload["error"]["kind"], "not-nilpotent");
    assert!(payload["error"]["explanation"].is_string());
}

#[test]
fn balance_and_de_bruijn() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["group", "cyclic", "--n", "3", "--out", "z3.json"]);
    run(d, &["cycle", "construct", "--mode", "ap", "--group", "z3.json", "--out", "ap.json"]);
    let (code, payload, _) = run(d, &["cycle", "construct", "--mode", "interleave", "--cycle", "ap.json", "--out", "il.json"]);
    assert_eq!(code, 0);
    assert_eq!(payload["cycle"]["entries"], serde_json::json!([0, 0, 1, 2, 2, 1]));
    let (code, payload, _) = run(d, &["cycle", "balance", "--cycle", "il.json", "--r", "4", "--variants", "all"]);
    assert_eq!((code, &payload["balanced"]), (0, &Value::Bool(true)));
    let (code, payload, _) = run(d, &["cycle", "balance", "--cycle", "ap.json", "--r", "1"]);
    assert_eq!((code, &payload["first_failing_depth"]), (1, &serde_json::json!(1)));

    let (code, _, _) = run(d, &["cycle", "construct", "--mode", "debruijn", "--group", "z3.json", "--r", "2", "--out", "db.json"]);
    assert_eq!(code, 0);
    let (_, payload, _) = run(d, &["cycle", "census", "--cycle", "db.json", "--width", "3"]);
    assert_eq!(payload["uniform"], true);
    let (code, _, _) = run_env(
        d,
        &["cycle", "construct", "--mode", "debruijn", "--group", "z3.json", "--r", "6"],
        &[("ROUNDGROUPS_BUDGET", "100")],
    );
    assert_eq!(code, 3);
}

#[test]
fn certificates() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["group", "symmetric", "--l", "3", "--out", "s3.json"]);
    let (code, payload, _) = run(d, &["certify", "s3.json"]);
    assert_eq!(code, 0);
    let cert = &payload["certificate"];
    assert_eq!(cert["ls"], serde_json::json!([2, 3]));
    assert_eq!(cert["Rs"], serde_json::json!([4, 3]));
    assert_eq!((cert["product"].as_u64(), cert["bound"].as_u64()), (Some(12), Some(6)));

    run(d, &["group", "cyclic", "--n", "9", "--out", "z9.json"]);
    let (code, payload, _) = run(d, &["certify", "z9.json", "--max-s", "4"]);
    assert_eq!(code, 0);
    assert!(payload["certificate"].is_null());
    assert_eq!(payload["nilpotent"], true);

    std::fs::write(d.join("bad.json"), r#"{"name":"x","order":2,"table":[0,1,1,1]}"#).unwrap();
    let (code, payload, _) = run(d, &["certify", "bad.json"]);
    assert_eq!(code, 2);
    assert!(payload["error"]["message"].as_str().unwrap().contains("latin-square"));

    let (code, payload, _) = run(d, &["certify", "--dihedral", "6"]);
    assert_eq!(code, 0);
    assert_eq!(payload["certificate"]["Rs"], serde_json::json!([8, 3]));
    let (code, _, _) = run(d, &["certify", "--dihedral", "4"]);
    assert_eq!(code, 2);
    let (code, payload, _) = run(d, &["certify", "--recurrences", "10"]);
    assert_eq!(code, 0);
    assert_eq!(payload["rows"][4]["r2"], "10");
}

#[test]
fn frobenius_queries() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let (code, payload, _) = run(d, &["frobenius", "--set", "3,5"]);
    assert_eq!(code, 0);
    assert_eq!(payload["frobenius"], 7);
    assert_eq!(payload["gaps"], serde_json::json!([1, 2, 4, 7]));
    let (_, payload, _) = run(d, &["frobenius", "--set", "4,6"]);
    assert_eq!(payload["frobenius"], "infinity");
    let (_, payload, _) = run(d, &["frobenius", "--phi-prime", "12"]);
    assert_eq!((payload["b"].clone(), payload["phi"].clone()), (serde_json::json!([3, 4]), serde_json::json!(5)));
    let (code, payload, stderr) = run(d, &["frobenius", "--bound-sweep", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(payload["all_hold"], true);
    assert!(stderr.contains("all hold"));
    let (_, payload, _) = run(d, &["frobenius", "--set", "3,5", "--represent", "11"]);
    assert_eq!(payload["representation"]["coefficients"], serde_json::json!([2, 1]));
    let (_, payload, _) = run(d, &["frobenius", "--k-bound", "4"]);
    assert_eq!(payload["bound"], "120");
    let (code, _, _) = run(d, &["frobenius", "--set", "3,x"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(d, &["frobenius"]);
    assert_eq!(code, 2);
}

#[test]
fn accept_runs_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = ["accept", "--suite", "fast", "--seed", "42", "--criterion", "2"];
    let first = raw_stdout(d, &args);
    assert_eq!(first, raw_stdout(d, &args));
    let payload: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(payload["passed"], true);

    let (code, payload, stderr) = run(d, &["accept", "--criterion", "5", "--inject-fault"]);
    assert_eq!(code, 1);
    assert!(payload["criteria"][0]["detail"].as_str().unwrap().contains("latin-square"));
    assert!(stderr.contains("FAIL"));
}

#[test]
fn emitted_artifacts_reload() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["group", "dicyclic", "--m", "2", "--out", "q8.json"]);
    let (code, _, _) = run(d, &["cycle", "construct", "--mode", "totally-round", "--group", "q8.json", "--out", "q8c.json"]);
    assert_eq!(code, 0);
    for k in ["3", "5", "7"] {
        let (code, payload, _) = run(d, &["cycle", "check", "--k", k, "--cycle", "q8c.json"]);
        assert_eq!(code, 0, "{payload}");
    }
    let (code, payload, _) = run(d, &["certify", "q8.json"]);
    assert_eq!(code, 0);
    assert!(payload["certificate"].is_null());
}
