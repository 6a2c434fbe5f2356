use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_pathsum-equiv");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CRZ: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncrz(pi) q[0],q[1];\n";
const HCXH: &str = "OPENQASM 2.0;\nqreg q[2];\nh q[1];\ncx q[0],q[1];\nh q[1];\n";
const CZ_NEG: &str =
    "OPENQASM 2.0;\nqreg q[2];\ncz q[0],q[1];\nz q[1];\nx q[1];\nz q[1];\nx q[1];\n";
const HCXH_T: &str = "OPENQASM 2.0;\nqreg q[2];\nh q[1];\ncx q[0],q[1];\nh q[1];\nt q[0];\n";

#[test]
fn check_equivalent_up_to_phase() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH);
    let out = run(&["check", s(&a), s(&b)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("equivalent"));
}

#[test]
fn check_exact_policy_distinguishes_phase() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH);
    let neg = write(dir.path(), "neg.qasm", CZ_NEG);
    for mode in ["rr", "wmc", "hybrid"] {
        let out = run(&["check", s(&a), s(&neg), "--mode", mode, "--phase", "exact"]);
        assert_ne!(code(&out), 0, "mode {mode}");
        let out = run(&["check", s(&a), s(&neg), "--mode", mode]);
        assert_eq!(code(&out), 0, "mode {mode}");
    }
    let out = run(&["check", s(&a), s(&b), "--mode", "wmc", "--phase", "exact"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_not_equivalent() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH_T);
    for mode in ["hybrid", "wmc"] {
        let out = run(&["check", s(&a), s(&b), "--mode", mode]);
        assert_eq!(code(&out), 1, "mode {mode}");
    }
}

#[test]
fn rr_mode_reports_unknown() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH_T);
    let out = run(&["check", s(&a), s(&b), "--mode", "rr"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn json_report_fields() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH);
    let out = run(&["check", s(&a), s(&b), "--mode", "wmc", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "status",
        "mode",
        "n",
        "gates_1",
        "gates_2",
        "m_before_reduction",
        "m_after_reduction",
        "reduction_steps",
        "wmc_vars",
        "wmc_clauses",
        "diag_sum",
        "theta",
        "timings_ms",
        "backend",
        "warnings",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["n"], 2);
    assert_eq!(v["mode"], "wmc");
    assert_eq!(v["diag_sum"]["re"].as_f64().unwrap(), 4.0);
    assert!(v["timings_ms"]["parse"].as_f64().unwrap() >= 0.0);
}

#[test]
fn usage_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let bad = write(
        dir.path(),
        "bad.qasm",
        "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n",
    );
    let one = write(
        dir.path(),
        "one.qasm",
        "OPENQASM 2.0;\nqreg q[1];\nh q[0];\n",
    );
    assert_eq!(code(&run(&["check", s(&a), s(&bad)])), 4);
    assert_eq!(code(&run(&["check", s(&a), s(&one)])), 4);
    assert_eq!(code(&run(&["check", s(&a), "/nonexistent.qasm"])), 4);
    assert_eq!(code(&run(&["check", s(&a), s(&a), "--mode", "fast"])), 4);
    assert_eq!(code(&run(&["frobnicate"])), 4);
    assert_eq!(code(&run(&["gen", "ghz", "0"])), 4);
    assert_eq!(code(&run(&["gen", "teleport", "3"])), 4);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn gen_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    let plain = run(&["gen", "qft", "5"]);
    let commuted = run(&["gen", "qft", "5", "--commuted"]);
    let faulty = run(&["gen", "qft", "5", "--fault-seed", "7"]);
    for o in [&plain, &commuted, &faulty] {
        assert_eq!(code(o), 0);
    }
    let a = write(
        dir.path(),
        "a.qasm",
        &String::from_utf8_lossy(&plain.stdout),
    );
    let b = write(
        dir.path(),
        "b.qasm",
        &String::from_utf8_lossy(&commuted.stdout),
    );
    let f = write(
        dir.path(),
        "f.qasm",
        &String::from_utf8_lossy(&faulty.stdout),
    );
    assert_eq!(code(&run(&["check", s(&a), s(&b)])), 0);
    assert_eq!(code(&run(&["check", s(&a), s(&f)])), 1);
}

#[test]
fn export_then_count() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.qasm", CRZ);
    let b = write(dir.path(), "b.qasm", HCXH);
    let out = dir.path().join("miter.wcnf");
    let e = run(&["export", s(&a), s(&b), s(&out), "--mode", "wmc"]);
    assert_eq!(code(&e), 0, "{}", String::from_utf8_lossy(&e.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("p cnf"));
    let c = run(&["count", s(&out)]);
    assert_eq!(code(&c), 0);
    let stdout = String::from_utf8_lossy(&c.stdout);
    assert!(stdout.starts_with("count 8"), "{stdout}");
}

#[test]
fn count_rejects_malformed_file() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "x.wcnf", "p cnf two 1\n1 0\n");
    assert_eq!(code(&run(&["count", s(&f)])), 4);
}
