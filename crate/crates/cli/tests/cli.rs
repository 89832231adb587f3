use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_empathica"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_prisoners_dilemma() {
    let v = json_stdout(&["solve", "--input", "pd"]);
    assert_eq!(v["pure"], serde_json::json!([[2, 2]]));
    assert_eq!(v["berge"], serde_json::json!([[1, 1]]));
}

#[test]
fn identity_transform_is_a_no_op() {
    let v = json_stdout(&["transform", "--input", "pd", "--lambda", "1,0,0,1"]);
    assert_eq!(v["A"], serde_json::json!([[3.0, 0.0], [5.0, 1.0]]));
    assert_eq!(v["B"], serde_json::json!([[3.0, 5.0], [0.0, 1.0]]));
}

#[test]
fn transform_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(run(&["transform", "--input", "pd", "--lambda", "1,0,0,1", "--out", d]).status.success());
    let first = dir.path().join("transformed.json");
    let second_dir = dir.path().join("again");
    let out = run(&[
        "transform",
        "--input",
        first.to_str().unwrap(),
        "--lambda",
        "1,0,0,1",
        "--out",
        second_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        fs::read(&first).unwrap(),
        fs::read(second_dir.join("transformed.json")).unwrap()
    );
}

#[test]
fn pennies_cycle_is_reported() {
    let v = json_stdout(&[
        "simulate", "--input", "matching_pennies", "--rate", "0.01", "--steps", "100000", "--start", "0.4,0.6",
    ]);
    assert_eq!(v["diagnostics"]["cycle_detected"], Value::Bool(true));
    assert_eq!(v["diagnostics"]["converged"], Value::Bool(false));
}

fn trajectory(dir: &Path, seed: &str) -> Vec<u8> {
    let out = run(&[
        "simulate", "--input", "pd", "--steps", "200", "--seed", seed, "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    fs::read(dir.join("trajectory.csv")).unwrap()
}

#[test]
fn seeded_runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let first = trajectory(a.path(), "7");
    assert_eq!(first, trajectory(b.path(), "7"));
    assert_ne!(first, trajectory(c.path(), "8"));
    assert!(String::from_utf8(first).unwrap().starts_with("t,p1,p2"));
}

#[test]
fn field_and_svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("field.svg");
    let out = run(&[
        "field", "--input", "coordination", "--grid", "5", "--out", dir.path().to_str().unwrap(), "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 26);
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn hierarchy_writes_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "hierarchy", "--input", "pd", "--lambda", "1,0.5,0.5,1", "--kmax", "4", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("hierarchy.csv")).unwrap();
    assert!(csv.starts_with("k,l11_k,l12_k,l21_k,l22_k,eq_signature"));
    assert!(dir.path().join("verdict.json").exists());
}

#[test]
fn malformed_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"A\":").unwrap();
    let out = run(&["solve", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equal_costs_exit_with_two() {
    let out = run(&["ess", "--input", "pd", "--c1", "1", "--c2", "1", "--V", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c1 ≠ c2"));
}
