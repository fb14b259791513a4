use std::process::Command;

use mould_calc::cli::run;
use mould_calc::vfield::PreparedVectorField;

const RESONANT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/resonant.vf");
const SADDLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/saddle.vf");
const NONRESONANT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/nonresonant.vf");

fn ok(args: &[&str]) -> String {
    let out = run(std::iter::once("mould").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("mould").chain(args.iter().copied())).code
}

#[test]
fn nil_values() {
    assert_eq!(ok(&["nil", "--weights", "0,1,0"]), "2\n");
    assert_eq!(ok(&["nil", "--weights", "0,0,0"]), "0\n");
    assert_eq!(ok(&["nil", "--weights", "0"]), "1\n");
    assert_eq!(ok(&["nil", "--weights", "2,1,-1"]), "-1/2\n");
}

#[test]
fn nil_check_reports_routes() {
    assert_eq!(ok(&["nil-check", "--weights", "2,1,-1"]), "-1/2 (via master; routes agree: yes)\n");
    let all = ok(&["nil-check", "--weights", "1,-1,2", "--all-routes"]);
    assert!(all.contains("position 1") && all.contains("position 3"), "{all}");
}

#[test]
fn structured_output_is_json() {
    let text = ok(&["--format", "structured", "nil", "--weights", "0,1,0"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["value"], serde_json::json!(["2", "0"]));
}

#[test]
fn variance_values() {
    let args = ["variance", "--mould", "I", "--letter", "(0,2)", "--word", "(0,2)", "--lambda", "1,-1"];
    assert_eq!(ok(&args), "-2\n");
    let args = ["variance", "--mould", "Nil", "--letter", "(0,2)", "--word", "(1,1),(0,2)", "--lambda", "1,-1"];
    assert_eq!(ok(&args), "-1\n");
}

#[test]
fn tables_are_deterministic() {
    let args = ["nil-table", "--length", "3", "--samples", "20", "--seed", "11"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    assert!(first.contains("1 documented discrepancy, 0 fail"), "{first}");
}

#[test]
fn act_emits_the_nil_part() {
    let out = ok(&["act", "--field", RESONANT, "--mould", "Nil", "--order", "4", "--emit", "field"]);
    assert_eq!(out, "component 1: (1)*x1^2*x2\ncomponent 2: (-2)*x1*x2^2\n");
}

#[test]
fn emitted_field_loads_back() {
    let text = ok(&["--format", "structured", "act", "--field", SADDLE, "--mould", "Nil", "--order", "5", "--emit", "field"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nil.vf");
    std::fs::write(&path, &text).unwrap();
    let field = PreparedVectorField::from_json(&text).unwrap();
    assert_eq!(PreparedVectorField::from_json(&field.to_json()).unwrap(), field);
    let again = ok(&["act", "--field", path.to_str().unwrap(), "--mould", "I", "--order", "5", "--emit", "field"]);
    assert!(again.contains("(1)*x1^2*x2"), "{again}");
}

#[test]
fn decompose_passes() {
    let out = ok(&["decompose", "--field", SADDLE, "--order", "5"]);
    assert!(out.ends_with("result: PASS\n"), "{out}");
}

#[test]
fn oracle_passes() {
    let out = ok(&["oracle", "--field", RESONANT, "--letter", "(0,2)", "--mould", "invfact", "--order", "5"]);
    assert!(out.contains("PASS: variance along (0,2) matches at order 5"), "{out}");
    let out = ok(&["oracle", "--field", NONRESONANT, "--letter", "(3,0)", "--mould", "La", "--order", "5"]);
    assert!(out.contains("PASS"), "{out}");
}

#[test]
fn check_suite_passes() {
    let out = ok(&["check", "consistency", "--seed", "1", "--trials", "20", "--maxlen", "3"]);
    assert!(out.starts_with("consistency: PASS"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["nil", "--weights", "1,x"]), 2);
    assert_eq!(code(&["nil-table", "--length", "4"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["act", "--field", "/nonexistent.vf", "--mould", "Nil", "--order", "3"]), 3);
    assert_eq!(code(&["act", "--field", RESONANT, "--mould", "nil", "--order", "3"]), 2);
}

#[test]
fn binary_forwards_exit_code() {
    let bin = env!("CARGO_BIN_EXE_mould");
    let out = Command::new(bin).args(["nil", "--weights", "0,1,0"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "2\n");
    let out = Command::new(bin).args(["nil", "--weights", "oops"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
