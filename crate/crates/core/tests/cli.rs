use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use covrep::io::{matrix_from_json, rep_from_json, ReportJson};
use covrep::linalg::{pinv, ComplexMatrix};
use serde_json::Value;

fn covrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covrep"))
        .args(args)
        .env_remove("COVREP_TOL")
        .env_remove("COVREP_MAX_DIM")
        .output()
        .expect("spawn covrep")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["gen", "shift", "--out", p(&out)];
    args.extend_from_slice(extra);
    let o = covrep(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn gen_check_roundtrip_on_dirichlet_shift() {
    let dir = tempfile::tempdir().unwrap();
    let rep = gen(dir.path(), "d.json", &["--n", "1", "--window", "0..6", "--dirichlet"]);
    let report = dir.path().join("r.json");
    let o = covrep(&["check", "--input", p(&rep), "--report", p(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let rj: ReportJson = serde_json::from_str(&text).unwrap();
    let r = rj.to_report().unwrap();
    assert!(!r.has_falsification());
    assert!(r.get("shift-dagger=closed-form").is_some_and(|c| c.passed()));
    assert_eq!(rj.input_digest.len(), 64);
}

#[test]
fn check_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let rep = gen(dir.path(), "u.json", &["--n", "2", "--window", "0..5", "--unit"]);
    let run = || {
        let o = covrep(&["check", "--input", p(&rep), "--battery", "duality"]);
        assert_eq!(code(&o), 0);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let checks: Vec<(Value, Value, Value)> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].clone(), c["verdict"].clone(), c["margin"].clone()))
            .collect();
        checks
    };
    assert_eq!(run(), run());
}

#[test]
fn text_format_lists_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let rep = gen(dir.path(), "u.json", &["--n", "1", "--window", "0..4", "--unit"]);
    let o = covrep(&["check", "--input", p(&rep), "--battery", "structure", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("pass"), "{s}");
}

#[test]
fn pinv_and_dual_match_independent_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("weights.json");
    std::fs::write(&weights, "[1.5, 0.5, 2.0, 1.0, 0.75]").unwrap();
    let rep_path = gen(dir.path(), "w.json", &["--n", "2", "--window", "0..4", "--weights", p(&weights)]);
    let rep = rep_from_json(&std::fs::read_to_string(&rep_path).unwrap()).unwrap();
    let v = rep.v_tilde().clone();

    let out = dir.path().join("pinv.json");
    assert_eq!(code(&covrep(&["pinv", "--input", p(&rep_path), "--out", p(&out)])), 0);
    let dag = matrix_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // Penrose equations characterise the pseudoinverse.
    assert!((&(&v * &dag) * &v).dist(&v) < 1e-12);
    assert!((&(&dag * &v) * &dag).dist(&dag) < 1e-12);
    let vd = &v * &dag;
    assert!(vd.dist(&vd.adjoint()) < 1e-12);
    let dv = &dag * &v;
    assert!(dv.dist(&dv.adjoint()) < 1e-12);

    let out = dir.path().join("dual.json");
    assert_eq!(code(&covrep(&["dual", "--input", p(&rep_path), "--out", p(&out)])), 0);
    let dual = rep_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let gram = v.adjoint_mul(&v);
    let want: ComplexMatrix = &v * &pinv(&gram, None).unwrap();
    assert!(dual.v_tilde().dist(&want) < 1e-12);
}

#[test]
fn wold_reports_unilateral_structure() {
    let dir = tempfile::tempdir().unwrap();
    let rep = gen(dir.path(), "u.json", &["--n", "1", "--window", "0..5", "--unit"]);
    let out = dir.path().join("wold.json");
    assert_eq!(code(&covrep(&["wold", "--input", p(&rep), "--out", p(&out)])), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["dim_h"], 6);
    assert_eq!(v["wandering"]["dim"], 1);
    assert_eq!(v["regular"], false);
    assert_eq!(v["falsifications"], 0);
}

#[test]
fn fuzz_summary_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("fuzz.json");
    let o = covrep(&["fuzz", "--trials", "12", "--seed", "3", "--jobs", "2", "--report", p(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL 0"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["extra"]["trials"], 12);
    assert_eq!(v["extra"]["falsifying_trials"].as_array().unwrap().len(), 0);

    let o = covrep(&["fuzz", "--trials", "6", "--seed", "3", "--kinds", "dense,rank-deficient", "--dims", "h<=2,n<=2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("trials 6"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&covrep(&[])), 2);
    assert_eq!(code(&covrep(&["check"])), 2);
    assert_eq!(code(&covrep(&["check", "--input", "/nonexistent/rep.json"])), 2);
    assert_eq!(code(&covrep(&["fuzz", "--trials", "1", "--dims", "k<=3"])), 2);
    assert_eq!(code(&covrep(&["fuzz", "--trials", "1", "--kinds", "banana"])), 2);
    let out = dir.path().join("x.json");
    assert_eq!(code(&covrep(&["gen", "shift", "--n", "1", "--window", "3..1", "--unit", "--out", p(&out)])), 2);
    assert_eq!(code(&covrep(&["gen", "shift", "--n", "1", "--window", "0..3", "--out", p(&out)])), 2);
    assert_eq!(code(&covrep(&["--help"])), 0);
}
