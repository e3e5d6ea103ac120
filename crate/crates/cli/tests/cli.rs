//! End-to-end checks of the `pbpc` binary: exit codes, JSON outputs, and
//! the compile/simulate file round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pbpc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pbpc"))
}

fn programs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../programs")
}

fn run(args: &[&str]) -> Output {
    pbpc().args(args).output().expect("spawn pbpc")
}

#[test]
fn check_exit_codes_reflect_the_classification() {
    let pairs = programs().join("pairs.pbp");
    let out = run(&["check", pairs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "pairs is pbp");

    let rec = programs().join("rec.pbp");
    let out = run(&["check", rec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "rec is wf and width 1 only");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("basic: false"));

    let out = run(&["check", "--builtin", "qft", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pbp"], serde_json::Value::Bool(true));
}

#[test]
fn non_wf_program_exits_three() {
    let dir = std::env::temp_dir().join("pbpc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("loop.pbp");
    std::fs::write(&path, "decl f(qs) { call f(qs); } :: call f(qs);").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn run_reports_outcome_and_time() {
    let pairs = programs().join("pairs.pbp");
    let out = run(&[
        "run",
        pairs.to_str().unwrap(),
        "--input",
        "00111",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "done");
    assert_eq!(v["time"], 3);
    // |00111> flips its last qubit: index 6 of the output state
    assert_eq!(v["state"][6][0], 1.0);
}

#[test]
fn compile_then_simulate_roundtrips_through_the_file() {
    let dir = std::env::temp_dir().join("pbpc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let circ = dir.join("qft3.json");
    let out = run(&[
        "compile",
        "--builtin",
        "qft",
        "--n",
        "3",
        "--out",
        circ.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["simulate", circ.to_str().unwrap(), "--input", "000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let amp = v["state"][0][0].as_f64().unwrap();
    assert!((amp - (1.0 / 8.0f64.sqrt())).abs() < 1e-9);
}

#[test]
fn compile_stats_use_the_documented_field_order() {
    let out = run(&["compile", "--builtin", "pairs", "--n", "6", "--stats"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let size = text.find("\"size\"").unwrap();
    let depth = text.find("\"depth\"").unwrap();
    let lowered = text.find("\"lowered_size\"").unwrap();
    assert!(size < depth && depth < lowered);
}

#[test]
fn verify_passes_on_pairs_and_seeds_reproducibly() {
    let pairs = programs().join("pairs.pbp");
    let args = [
        "verify",
        pairs.to_str().unwrap(),
        "--n",
        "6",
        "--trials",
        "20",
        "--tol",
        "1e-9",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed, same bytes");
}

#[test]
fn bench_emits_csv_and_json() {
    let out = run(&[
        "bench",
        "--builtin",
        "qft",
        "--strategy",
        "merge",
        "--n",
        "8:32:8",
        "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("n,size,depth,time,ancillas\n"));
    assert_eq!(text.lines().count(), 5);

    // statically erroneous sizes are skipped per row, not fatal:
    // this program addresses wire 2 unconditionally, so n = 1 errors
    let dir = std::env::temp_dir().join("pbpc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wire2.pbp");
    std::fs::write(&path, ":: qs[2] *= NOT;").unwrap();
    let out = run(&[
        "bench",
        path.to_str().unwrap(),
        "--strategy",
        "merge",
        "--n",
        "1:6:1",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["skipped"].as_array().unwrap().len(), 1);
    assert_eq!(v["skipped"][0]["n"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn usage_errors_exit_sixty_four() {
    let out = run(&["bench", "--builtin", "qft"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
