use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn asw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asw")).args(args).output().expect("run asw")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn build_to(dir: &Path, word: &str, r: &str) -> std::path::PathBuf {
    let path = dir.join("c.json");
    let out = asw(&["weave", "build", "--p", "2", "--r", r, "--word", word, "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(dir.path(), "F:s1,W", "1");
    let out = asw(&["weave", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["sigma_order"], 4);
    assert_eq!(rep["levels"][0]["checks"]["ferocious_residue"], true);
    assert_eq!(rep["levels"][1]["checks"]["wild_valuation"], true);
}

#[test]
fn certificate_carries_verification_section() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(dir.path(), "W", "1");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["word"], "W");
    assert_eq!(doc["levels"][0]["type"], "W");
    assert_eq!(doc["verification"]["pass"], true);
}

#[test]
fn tampered_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(dir.path(), "W,W", "1");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["levels"][0]["gamma2"] = serde_json::json!([{"mono": "1", "coeff": "1/t"}]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let out = asw(&["weave", "verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    assert_eq!(rep["pass"], false);
    assert_eq!(rep["levels"][0]["checks"]["gamma_in_max_ideal"], false);
}

#[test]
fn unreadable_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"version\": 1}").unwrap();
    let out = asw(&["weave", "verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn batch_verify_reports_each_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = build_to(dir.path(), "W", "1");
    let b = dir.path().join("b.json");
    std::fs::copy(&a, &b).unwrap();
    let out = asw(&["weave", "verify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 2);
}

#[test]
fn classify_ferocious() {
    let out = asw(&["classify", "--p", "2", "--r", "1", "--alpha", "s1/t^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "Ferocious");
    assert_eq!(v["valuation"], "-2");
}

#[test]
fn classify_reduces_first() {
    let v = json(&asw(&["classify", "--p", "2", "--alpha", "s1^2/t^2"]));
    assert_eq!(v["class"], "Wild");
    assert_eq!(v["optimal"], "s1/t");
}

#[test]
fn as_equiv_verdicts() {
    let v = json(&asw(&["as-equiv", "--p", "2", "--a", "s1/t^128", "--b", "s1/t^256"]));
    assert_eq!(v["verdict"], "NonEquivalent");
    let v = json(&asw(&["as-equiv", "--p", "2", "--a", "1/t^3", "--b", "1/t^3 + 1/t^2 + 1/t"]));
    assert_eq!(v["verdict"], "Equivalent");
}

#[test]
fn gene_subcommands() {
    let ok = asw(&["gene", "validate", "--p", "2", "--r", "1", "--word", "F:s1,W,F:s1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["genome"], "FWF");
    let bad = asw(&["gene", "validate", "--p", "2", "--r", "1", "--word", "F:s2"]);
    assert_eq!(bad.status.code(), Some(1));
    let adm = asw(&["gene", "admissible", "--word", "F:s1,W,F:s1", "--target", "s1:2"]);
    assert_eq!(json(&adm)["admissible"], true);
    let not = asw(&["gene", "admissible", "--word", "F:s1,W,F:s1", "--target", "s1:1"]);
    assert_eq!(not.status.code(), Some(1));
}

#[test]
fn witt_symbolic_add() {
    let v = json(&asw(&["witt", "add", "--p", "2", "--m", "2", "--lhs", "(x1,x2)", "--rhs", "(a,0)", "--symbolic"]));
    assert_eq!(v["sum"], serde_json::json!(["x1 + a", "x1*a + x2"]));
}

#[test]
fn witt_split_check() {
    let out = asw(&["witt", "split-check", "--p", "3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["in_ideal"], true);
    assert_eq!(v["h_i"].as_array().unwrap().len(), 3);
}

#[test]
fn text_format() {
    let out = asw(&["--format", "text", "classify", "--p", "2", "--alpha", "1/t"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("Wild"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(asw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(asw(&["classify", "--p", "2"]).status.code(), Some(2));
    assert_eq!(asw(&["classify", "--p", "7", "--alpha", "t"]).status.code(), Some(2));
    let syn = asw(&["classify", "--p", "2", "--r", "2", "--alpha", "s3"]);
    assert_eq!(syn.status.code(), Some(2));
    assert!(!syn.stderr.is_empty());
}
