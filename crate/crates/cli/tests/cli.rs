//! The `dox` binary: exit codes, emitters and error reports.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", &format!("{name}.dox")].iter().collect()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn dox(args: &[&str], input: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dox")).args(args).arg(input).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn example1_with(from: &str, to: &str) -> String {
    let text = std::fs::read_to_string(fixture("example1")).unwrap();
    assert!(text.contains(from));
    text.replacen(from, to, 1)
}

/// Entry `{"re": .., "im": ..}` as a pair of strings.
fn entry(v: &Value) -> (&str, &str) {
    (v["re"].as_str().unwrap(), v["im"].as_str().unwrap())
}

#[test]
fn nakayama_json_for_example1() {
    let out = dox(&["nakayama", "--emit", "json"], &fixture("example1"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mu = v["mu_B"].as_array().unwrap();
    assert_eq!(mu.len(), 4);
    for (i, row) in mu.iter().enumerate() {
        for (j, c) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(entry(c), (if i == j { "1" } else { "0" }, "0"));
        }
    }
    assert!(v["div"].as_array().unwrap().iter().all(|t| t.as_array().unwrap().is_empty()));
    assert_eq!(v["calabi_yau"], Value::Bool(true));
}

#[test]
fn verify_example1_passes() {
    let out = dox(&["verify", "--degree", "6", "--emit", "json"], &fixture("example1"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_passed"], Value::Bool(true));
    assert!(v["failed_checks"].as_array().unwrap().is_empty());
    assert_eq!(v["resolution"]["degree_bound"], Value::from(6));
}

#[test]
fn superpotential_latex_for_kx() {
    let out = dox(&["superpotential", "--emit", "latex"], &fixture("trimmed_kx"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\\otimes"));
    assert!(text.contains("\\begin{document}") && text.contains("\\end{document}"));
}

#[test]
fn text_output_and_out_flag() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("kx_analyze.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_dox"))
        .args(["analyze", "--out"])
        .arg(&target)
        .arg(fixture("trimmed_kx"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("global_dimension: 1"));
    assert!(text.contains("certificate_passed: pass"));
}

#[test]
fn zero_p12_is_rejected() {
    let path = scratch("p12_zero.dox", &example1_with("p12 i", "p12 0"));
    let out = dox(&["validate", "--emit", "json"], &path);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "Validation");
    let names: Vec<&str> = v["error"]["violations"].as_array().unwrap().iter().map(|x| x["condition"].as_str().unwrap()).collect();
    assert!(names.contains(&"p12-nonzero"), "{names:?}");
}

#[test]
fn theta_violation_is_rejected() {
    let path = scratch("p11_one.dox", &example1_with("p11 0", "p11 1"));
    let out = dox(&["verify", "--emit", "json"], &path);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let violations = v["error"]["violations"].as_array().unwrap();
    let theta = violations.iter().find(|x| x["condition"] == "theta").expect("theta violation");
    assert!(!theta["witness"].as_str().unwrap().is_empty());
}

#[test]
fn non_regular_algebra_is_rejected() {
    let path = scratch("free.dox", "field Q\ngens a b\np12 1\nsigma a = [[a, 0], [0, a]]\nsigma b = [[b, 0], [0, b]]\n");
    assert_eq!(dox(&["analyze"], &path).status.code(), Some(1));
    let out = dox(&["nakayama", "--emit", "json"], &path);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "NotRegularEvidence");
}

#[test]
fn missing_star_is_a_parse_error() {
    let path = scratch("missing_star.dox", &example1_with("rel x2*x1 - i x1*x2", "rel x2*x1 - 2 x1 x2"));
    let out = dox(&["analyze", "--emit", "json"], &path);
    assert_eq!(out.status.code(), Some(2));
    let err = &json(&out)["error"];
    assert_eq!(err["kind"], "ParseError");
    assert_eq!(err["line"], Value::from(4));
    assert_eq!(err["column"], Value::from(18));
    assert_eq!(err["expected"], "`*`");
}

#[test]
fn imaginary_unit_under_q_is_a_field_mismatch() {
    let path = scratch("field_mismatch.dox", &example1_with("field Q(i)", "field Q"));
    let out = dox(&["analyze", "--emit", "json"], &path);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "FieldMismatch");
}

#[test]
fn unreadable_input() {
    let out = dox(&["analyze"], &PathBuf::from("/nonexistent/input.dox"));
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn every_command_is_deterministic() {
    for cmd in ["analyze", "validate", "quadruple", "nakayama", "resolution", "superpotential"] {
        for format in ["text", "json", "latex"] {
            let a = dox(&[cmd, "--emit", format], &fixture("jordan_plane"));
            let b = dox(&[cmd, "--emit", format], &fixture("jordan_plane"));
            assert_eq!(a.status.code(), Some(0), "{cmd} {format}");
            assert_eq!(a.stdout, b.stdout, "{cmd} {format}");
        }
    }
}
