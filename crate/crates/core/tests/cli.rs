use std::path::PathBuf;
use std::process::{Command, Output};

use noc_topo::io::{metrics_row, to_json_pretty};
use noc_topo::topology::{build_topology, BuildConfig, Family, Size};

fn noc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noc-topo")).args(args).env("RUST_LOG", "error").output().unwrap()
}

fn sample() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/sample_run_1.txt").display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sample_run_golden() {
    let out = noc(&["shortest-path", "--matrix", &sample(), "--src", "5", "--dst", "7"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "No of 1 in the Matrix = 46\n\
         No of link is = 23\n\
         Input starting vertex = 5\n\
         Input destination = 7\n\
         Shortest path = 5 => 8 => 7\n\
         Minimum distance = 2\n"
    );
}

#[test]
fn same_vertex_and_unreachable() {
    let out = noc(&["shortest-path", "--matrix", &sample(), "--src", "4", "--dst", "4"]);
    assert!(stdout(&out).ends_with("Shortest path = 4\nMinimum distance = 0\n"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.txt");
    std::fs::write(&path, "3\n0 0 0\n0 0 0\n0 0 0\n").unwrap();
    let out = noc(&["shortest-path", "--matrix", path.to_str().unwrap(), "--src", "0", "--dst", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Unreachable");
}

#[test]
fn malformed_matrix_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "3\n0 1 0\n1 0 1\n").unwrap();
    let out = noc(&["shortest-path", "--matrix", path.to_str().unwrap(), "--src", "0", "--dst", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "MalformedMatrix");
}

#[test]
fn build_then_analyze_matches_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d2d.json");
    let file = file.to_str().unwrap();
    assert!(noc(&["build", "--family", "d2dmot", "--rows", "4", "--out", file]).status.success());
    let loaded = stdout(&noc(&["analyze", "--input", file]));
    let t = build_topology(Family::D2DMoT, Size::square(4), &BuildConfig::default()).unwrap();
    let direct = to_json_pretty(&metrics_row(&t).unwrap()).unwrap() + "\n";
    assert_eq!(loaded, direct);
    assert!(loaded.contains("\"diameter_measured\": 8"));
}

#[test]
fn analyze_mot_csv() {
    let out = noc(&["analyze", "--family", "mot", "--rows", "4", "--cols", "4", "--format", "csv"]);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!((fields[5], fields[6]), ("8", "8"));
}

#[test]
fn validate_d2d_mot_summary() {
    let out = noc(&["validate", "--family", "d2dmot", "--rows", "4", "--routing", "d2dmot"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["delivery_rate"], 1.0);
    assert_eq!(v["deadlock_free"], true);
}

#[test]
fn flag_errors_are_machine_readable() {
    let out = noc(&["build", "--family", "hypercube", "--rows", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "InvalidArgument");
    let out = noc(&["simulate", "--family", "mesh", "--rows", "4", "--injection", "150"]);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ConfigInvalid");
}

#[test]
fn compare_output_is_reproducible() {
    let args = ["compare", "--sizes", "2,4", "--measure", "300", "--format", "csv"];
    let a = stdout(&noc(&args));
    assert_eq!(a, stdout(&noc(&args)));
    assert!(a.starts_with("ip_blocks,t_d2dmot,t_mot,t_mesh,speedup_pct\n8,"));
}
