use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn cfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfree")).args(args).output().expect("run cfree")
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "single-line error record: {text}");
    serde_json::from_str(text.trim()).expect("json error record")
}

#[test]
fn transform_cr_of_geometric_phi() {
    let dir = TempDir::new().unwrap();
    let law = write(&dir, "law.json", &json!({
        "psi": ["0", "0", "0", "0", "0", "0"],
        "phi": ["1/2", "1/4", "1/8", "1/16", "1/32", "1/64"],
    }));
    let out = cfree(&["transform", "--kind", "cR", "--law", s(&law), "-N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let series = stdout_json(&out);
    assert_eq!(series["coeffs"], json!(["0", "1/2", "0", "0", "0", "0", "0"]));
    assert_eq!(series["order"], json!(6));
}

#[test]
fn transform_writes_output_file_and_csv() {
    let dir = TempDir::new().unwrap();
    let law = write(&dir, "law.json", &json!({"psi": ["0", "1", "0", "2"], "phi": [0, 1, 0, 2]}));
    let target = dir.path().join("r.csv");
    let out = cfree(&["--format", "csv", "transform", "--kind", "R", "--law", s(&law), "-N", "4", "-o", s(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), "k,coeff\n0,0\n1,0\n2,1\n3,0\n4,0\n");
}

#[test]
fn invert_conditional_needs_psi() {
    let dir = TempDir::new().unwrap();
    let series = write(&dir, "cr.json", &json!({"order": 4, "coeffs": ["0", "1/2", "0", "0", "0"]}));
    let psi = write(&dir, "psi.json", &json!(["0", "0", "0", "0"]));
    let out = cfree(&["invert", "--kind", "cR", "--series", s(&series), "--psi", s(&psi), "-N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["phi"], json!(["1/2", "1/4", "1/8", "1/16"]));

    let out = cfree(&["invert", "--kind", "cR", "--series", s(&series), "-N", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], json!("domain"));
}

#[test]
fn convolve_zero_laws() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.json", &json!({"psi": [0, 0, 0, 0], "phi": [0, 0, 0, 0]}));
    for path in ["transform", "axiomatic", "operator", "all"] {
        let out = cfree(&["convolve", "--kind", "add", "--x", s(&zero), "--y", s(&zero), "-N", "4", "--path", path]);
        assert_eq!(out.status.code(), Some(0), "{path}");
        let law = stdout_json(&out);
        assert_eq!(law["psi"], json!(["0", "0", "0", "0"]));
        assert_eq!(law["phi"], json!(["0", "0", "0", "0"]));
    }
}

#[test]
fn path_all_matches_single_paths() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &json!({"psi": ["1", "1/2", "2", "-1"], "phi": ["2", "0", "1/3", "1"]}));
    let y = write(&dir, "y.json", &json!({"psi": ["-1", "1", "0", "3"], "phi": ["1/2", "1", "1", "-2"]}));
    for kind in ["add", "mul"] {
        let run = |path: &str| cfree(&["convolve", "--kind", kind, "--x", s(&x), "--y", s(&y), "-N", "4", "--path", path]);
        let all = run("all");
        assert_eq!(all.status.code(), Some(0), "{kind}");
        for path in ["transform", "axiomatic", "operator"] {
            assert_eq!(run(path).stdout, all.stdout, "{kind} {path}");
        }
    }
}

#[test]
fn mul_precondition_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &json!({"psi": [0, 1, 0], "phi": [1, 1, 1]}));
    let out = cfree(&["convolve", "--kind", "mul", "--x", s(&x), "--y", s(&x), "-N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], json!("domain"));
}

#[test]
fn malformed_law_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"psi\": [\"1/0\"]").unwrap();
    let out = cfree(&["transform", "--kind", "R", "--law", s(&bad), "-N", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], json!("parse"));
}

#[test]
fn usage_errors_exit_two() {
    let out = cfree(&["transform", "--kind", "Q", "--law", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], json!("usage"));
    let out = cfree(&["verify", "--suite", "remark1", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_operator_expression() {
    let dir = TempDir::new().unwrap();
    // A*_0 + A_{0,1}: the additive model with b = 0 and F = z, so cR = z^2.
    let op = write(&dir, "op.json", &json!({
        "op": "sum",
        "terms": [{"op": "a_star", "k": 0}, {"op": "a_n", "k": 0, "n": 1}],
    }));
    let out = cfree(&["simulate", "--op", s(&op), "-N", "4", "--lh", "4", "--lk", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let law = stdout_json(&out);
    assert_eq!(law["psi"], json!(["0", "0", "0", "0"]));
    assert_eq!(law["phi"], json!(["0", "1", "0", "1"]));

    let out = cfree(&["simulate", "--op", s(&op), "-N", "4", "--lh", "2", "--lk", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_cfree"))
        .args(["simulate", "--op", s(&op), "-N", "4", "--lh", "9", "--lk", "9"])
        .env("CFREE_MAX_RANK", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_overflow_is_reported() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "op.json", &json!({"op": "a_star", "k": 0}));
    let out = cfree(&["simulate", "--op", s(&op), "-N", "3", "--lh", "3", "--lk", "3"]);
    // A*^n Ω needs K-rank n; rank 3 is exactly enough.
    assert_eq!(out.status.code(), Some(0));
    let op = write(&dir, "op2.json", &json!({"op": "product", "factors": [{"op": "a_star", "k": 0}, {"op": "a_star", "k": 0}]}));
    let out = cfree(&["simulate", "--op", s(&op), "-N", "3", "--lh", "3", "--lk", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], json!("overflow"));
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["verify", "--suite", "mainthm-add", "--trials", "5", "--seed", "42", "-N", "6"];
    let first = cfree(&args);
    assert_eq!(first.status.code(), Some(0));
    let report = stdout_json(&first);
    assert_eq!(report["passed"], json!(true));
    assert_eq!(report["suite"], json!("mainthm-add"));
    assert_eq!(cfree(&args).stdout, first.stdout);
}
