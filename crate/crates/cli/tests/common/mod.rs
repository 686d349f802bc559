//! Helpers shared by the CLI contract tests and the acceptance suite.
#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub const THIRD: [&str; 10] = ["--q", "0.5", "--beta", "0.3333333333333333", "--a", "1", "--b", "1", "--k", "1"];

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgenocchi")).args(args).output().expect("binary runs")
}

pub fn with_model(head: &[&str], tail: &[&str]) -> Vec<String> {
    head.iter().chain(THIRD.iter()).chain(tail.iter()).map(|s| s.to_string()).collect()
}

fn owned(args: &[&str]) -> Vec<String> {
    args.iter().map(|s| s.to_string()).collect()
}

pub fn run_owned(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

pub fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

pub fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

/// (arguments, expected exit code)
pub fn exit_code_cases() -> Vec<(Vec<String>, i32)> {
    vec![
        (with_model(&["eval"], &["--n", "1", "--x", "0", "--method", "series"]), 0),
        (with_model(&["eval"], &["--n", "2", "--x", "0.25"]), 0),
        (owned(&["eval", "--q", "0.5", "--beta", "1", "--a", "1", "--b", "1", "--k", "1", "--n", "1", "--x", "0", "--method", "closed"]), 3),
        (owned(&["eval", "--q", "0.5", "--beta", "1", "--a", "-1", "--n", "2", "--x", "0", "--method", "series"]), 3),
        (with_model(&["eval"], &["--n", "3", "--x", "0", "--method", "series", "--max-terms", "3"]), 3),
        (owned(&["eval", "--q", "1.5", "--beta", "0.2", "--a", "1", "--n", "1", "--x", "0"]), 2),
        (with_model(&["eval"], &["--n", "1", "--x", "-1"]), 2),
        (with_model(&["eval"], &["--n", "1", "--x", "0.5", "--method", "exact"]), 2),
        (with_model(&["eval"], &["--n", "1", "--x", "0", "--tol", "-1", "--method", "series"]), 2),
        (with_model(&["eval"], &["--n", "1"]), 1),
        (with_model(&["eval"], &["--n", "1", "--x", "0", "--method", "magic"]), 1),
        (with_model(&["eval"], &["--n", "1", "--x", "zero"]), 1),
        (owned(&["frobnicate"]), 1),
        (vec![], 1),
        (with_model(&["table"], &["--n-max", "2", "--x-grid", "0:1"]), 1),
        (with_model(&["table"], &["--n-max", "2", "--x-grid", "0:1:0.5"]), 0),
        (with_model(&["zeta"], &["--s", "0", "--x", "1"]), 0),
        (with_model(&["zeta"], &["--s", "2,3", "--x", "0"]), 2),
        (owned(&["zeta", "--s", "2", "--x", "1", "--q", "0.5", "--beta", "1", "--a", "-1"]), 3),
        (with_model(&["zeta"], &["--x", "1"]), 1),
        (owned(&["limit", "--target", "euler", "--n", "1", "--x", "0"]), 0),
        (owned(&["limit", "--target", "ozden", "--n", "2"]), 1),
        (owned(&["limit", "--target", "ozden", "--beta", "2", "--a", "2", "--b", "1", "--k", "1", "--n", "2"]), 3),
        // the printed prefactor 1/a^b flips the sign at a = -1
        (owned(&["limit", "--target", "genocchi", "--n", "2", "--variant", "printed"]), 4),
        (owned(&["verify", "--identity", "distribution", "--grid", "smoke"]), 0),
        (owned(&["verify", "--grid", "huge"]), 1),
        (owned(&["verify", "--report", "xml"]), 1),
        (owned(&["--help"]), 0),
    ]
}

/// Runs one matrix case; `Err` describes the mismatch.
pub fn check_exit_case(args: &[String], want: i32) -> Result<(), String> {
    let out = run_owned(args);
    if out.status.code() != Some(want) {
        return Err(format!(
            "{args:?}: exit {:?}, want {want}; stderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    if want >= 2 {
        if out.stderr.is_empty() {
            return Err(format!("{args:?}: no diagnostic on stderr"));
        }
        let env = json(&out);
        if env["errors"].as_array().map_or(true, |e| e.is_empty()) {
            return Err(format!("{args:?}: envelope carries no error record"));
        }
    }
    Ok(())
}

pub fn determinism_commands() -> Vec<Vec<String>> {
    vec![
        with_model(&["eval"], &["--n", "3", "--x", "0.25"]),
        with_model(&["table"], &["--n-max", "3", "--x-grid", "0:2:0.5", "--method", "series"]),
        with_model(&["zeta"], &["--s", "0.5,2", "--x", "1.5"]),
        owned(&["limit", "--target", "genocchi", "--n", "3", "--x", "1"]),
        owned(&["verify", "--identity", "all", "--grid", "smoke"]),
    ]
}

pub fn json_commands() -> Vec<Vec<String>> {
    vec![
        with_model(&["eval"], &["--n", "3", "--x", "0.25"]),
        with_model(&["table"], &["--n-max", "3", "--x-grid", "0:1:0.5", "--format", "json"]),
        with_model(&["zeta"], &["--s", "-1.5,0.25", "--x", "2"]),
        owned(&["limit", "--target", "euler", "--n", "4", "--x", "2"]),
        owned(&["verify", "--identity", "symmetry", "--grid", "smoke"]),
        owned(&["eval", "--q", "0.5", "--beta", "1", "--a", "1", "--n", "1", "--x", "0"]),
    ]
}

pub fn check_deterministic(args: &[String]) -> Result<(), String> {
    let a = run_owned(args);
    let b = run_owned(args);
    if a.stdout != b.stdout || a.status.code() != b.status.code() {
        return Err(format!("{args:?}: two runs differ"));
    }
    Ok(())
}

pub fn check_json_roundtrip(args: &[String]) -> Result<(), String> {
    let out = run_owned(args);
    let again = qgenocchi::report::to_canonical_string(&json(&out)) + "\n";
    if again.as_bytes() != out.stdout.as_slice() {
        return Err(format!("{args:?}: re-serialized JSON differs from emitted bytes"));
    }
    Ok(())
}
