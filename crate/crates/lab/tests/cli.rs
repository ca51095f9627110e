use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel-lab")).args(args).output().expect("the binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const QUARTER: &str = r#"{"generators":[[[2],[0]],[[0],[2]]]}"#;

#[test]
fn adjoint_of_the_self_adjoint_lattice() {
    let out = lab(&["adjoint", "--orders", "4", "--lattice", QUARTER]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["lattice"]["elements"], r["results"]["adjoint"]["elements"]);
    assert_eq!(r["results"]["adjoint"]["size"], 4);
    assert_eq!(r["results"]["self_adjoint"], true);
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn duality_over_all_lattices_of_z4() {
    let out = lab(&["duality", "--orders", "4", "--all-lattices", "--trials", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["lattices"].as_array().unwrap().len(), 15);
    let entries = r["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 15 * 5);
    assert!(entries.iter().all(|e| e["passed"] == true));
    assert_eq!(r["seed"], 7);
    assert!(String::from_utf8_lossy(&out.stderr).contains("checks passed"));
}

#[test]
fn tolerance_override_reaches_every_check() {
    let out = lab(&["duality", "--orders", "4", "--lattice", QUARTER, "--trials", "3", "--tol", "0"]);
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["tolerance"] == 0.0));
    // A zero tolerance leaves rounding error exposed on at least one check.
    assert_eq!(out.status.code(), Some(1));
    assert!(r["summary"]["failed"].as_u64().unwrap() > 0);
    assert_eq!(r["parameters"]["tol"], 0.0);
}

#[test]
fn bessel_bounds_of_the_point_mass() {
    let window = scratch("delta4.json", r#"{"values":[[1,0],[0,0],[0,0],[0,0]]}"#);
    let full = r#"{"generators":[[[1],[0]],[[0],[1]]]}"#;
    let out = lab(&["bessel", "--orders", "4", "--lattice", full, "--window", window.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r["results"]["bound"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((r["results"]["dual_bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["results"]["covolume"], "1/4");
}

#[test]
fn lattice_from_a_file() {
    let path = scratch("half.json", r#"{"orders":[4],"generators":[[[2],[0]],[[0],[1]]]}"#);
    let out = lab(&["adjoint", "--lattice", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["adjoint"]["size"], 2);
}

#[test]
fn malformed_json_reports_its_position() {
    let out = lab(&["adjoint", "--orders", "4", "--lattice", r#"{"generators": [[[2],[0]] oops}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column 27"), "{err}");
}

#[test]
fn mismatched_window_is_a_validation_error() {
    let window = scratch("short.json", r#"{"values":[[1,0],[0,0]]}"#);
    let out = lab(&["bessel", "--orders", "4", "--lattice", QUARTER, "--window", window.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid input"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lab(&[]).status.code(), Some(2));
    assert_eq!(lab(&["duality", "--orders", "4"]).status.code(), Some(2));
    assert_eq!(lab(&["bimodule", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(lab(&["adjoint", "--lattice", QUARTER]).status.code(), Some(2));
    assert_eq!(lab(&["selftest", "--max-order", "9"]).status.code(), Some(2));
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}

#[test]
fn lattices_of_z4() {
    let out = lab(&["lattices", "--orders", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["count"], 15);
    let sizes: Vec<u64> =
        r["results"]["lattices"].as_array().unwrap().iter().map(|l| l["lattice"]["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes.first(), Some(&1));
    assert_eq!(sizes.last(), Some(&16));
}

#[test]
fn random_bimodule_passes_and_is_reproducible() {
    let args = ["bimodule", "--random", "--seed", "3", "--blocks", "2", "--trials", "10"];
    let a = lab(&args);
    let b = lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["results"]["commutant_case"], false);
    assert!(r["results"]["constant"].as_f64().unwrap() >= 1.0);
}
