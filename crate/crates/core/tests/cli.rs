use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multitype"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn multitype_of_diagonal_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.eq", "# diagonal\nn=2\nv = z1*zb1 + z2^2*zb2^2\n");
    let doc = json(&run(&["multitype", "--input", &f, "--json"]));
    assert_eq!(doc["multitype"], serde_json::json!(["2", "4"]));
    assert_eq!(doc["weight"], serde_json::json!(["1/2", "1/4"]));
    assert_eq!(doc["generating_sequence"]["k"], serde_json::json!([1, 2]));
    let text = run(&["multitype", "--input", &f]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("multitype: (2, 4)"));
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "mix.eq", "n=2\nv = z1^2*zb1^2 - z1^2*zb2^3 - z2^3*zb1^2 + z2^3*zb2^3\n");
    for cmd in ["multitype", "normalize", "model"] {
        let a = run(&[cmd, "--input", &f, "--json"]);
        let b = run(&[cmd, "--input", &f, "--json"]);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.eq").display().to_string();
    assert_eq!(run(&["multitype", "--input", &missing]).status.code(), Some(1));

    let bad = write(dir.path(), "bad.eq", "n=2\nv = z1*zb1 + * z2\n");
    let out = run(&["multitype", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let complex = write(dir.path(), "complex.eq", "n=1\nv = i*z1*zb1\n");
    assert_eq!(run(&["multitype", "--input", &complex]).status.code(), Some(3));

    let infinite = write(dir.path(), "inf.eq", "n=2\nv = z1^2*zb1^2\n");
    assert_eq!(run(&["multitype", "--input", &infinite]).status.code(), Some(4));

    let a = write(dir.path(), "a.eq", "n=1\nv = z1^2*zb1^2\n");
    let b = write(dir.path(), "b.eq", "n=1\nv = z1^3*zb1^3\n");
    assert_eq!(run(&["equiv", "--input", &a, "--input2", &b]).status.code(), Some(6));
}

#[test]
fn check_weight_reports_adaptedness_and_validity() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.eq", "n=2\nv = z1*zb1 + z2^2*zb2^2\n");
    let yes = json(&run(&["check-weight", "--input", &f, "--weight", "1/2,1/4", "--json"]));
    assert_eq!(yes["adapted"], Value::Bool(true));
    assert_eq!(yes["valid"], Value::Bool(true));
    let no = json(&run(&["check-weight", "--input", &f, "--weight", "1/2,2/5", "--json"]));
    assert_eq!(no["valid"], Value::Bool(false));
    let wrong = run(&["check-weight", "--input", &f, "--weight", "1/2"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn equiv_finds_a_verified_map() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.eq", "n=2\nv = z1^2*zb1^2 + z2^3*zb2^3\n");
    let b = write(dir.path(), "b.eq", "n=2\nv = 16*z1^2*zb1^2 + z2^3*zb2^3\n");
    let doc = json(&run(&["equiv", "--input", &a, "--input2", &b, "--json"]));
    assert_eq!(doc["verified"], Value::Bool(true));
    assert_eq!(doc["weight"], serde_json::json!(["1/4", "1/6"]));
}

#[test]
fn oracle_agrees_on_small_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.eq", "n=2\nv = z1*zb1 + z2^2*zb2^2\n");
    let doc = json(&run(&["oracle", "--input", &f, "--json", "--denominator-bound", "6"]));
    assert_eq!(doc["weight"], serde_json::json!(["1/2", "1/4"]));
}
