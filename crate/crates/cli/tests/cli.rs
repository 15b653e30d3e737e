use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sparselab_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparselab")).args(args).output().unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, args: &[&str]) {
    let out = bin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = golden(name);
    if std::env::var_os("SPARSELAB_BLESS").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let expected = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&expected), "{name}");
}

#[test]
fn verify_matches_golden() {
    check_golden("verify.csv", &["verify", "--depth", "6"]);
}

#[test]
fn tail_matches_golden() {
    check_golden("tail.csv", &["tail", "--depth", "5", "--gamma", "0.5"]);
}

#[test]
fn scaling_matches_golden() {
    check_golden("scaling_repeated.json", &["scaling", "--ensemble", "repeated", "--n", "2,4", "--format", "json"]);
}

#[test]
fn sharpness_matches_golden() {
    check_golden("sharpness.csv", &["sharpness", "--n", "4,8,16,32"]);
}

#[test]
fn lemma_matches_golden() {
    check_golden("lemma.csv", &["lemma"]);
}

#[test]
fn dominate_matches_golden() {
    check_golden("dominate.csv", &["dominate"]);
}

#[test]
fn directional_matches_golden() {
    check_golden("directional.json", &["directional", "--format", "json"]);
}

#[test]
fn oversized_sharpness_is_rejected() {
    let out = bin(&["sharpness", "--n", "1000000", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("depth"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["sparselab", "nonsense"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "verify", "--dim", "x"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "scaling", "--ensemble", "diagonal"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "scaling", "--p", "1"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "lemma", "--p", "3"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "lemma", "--delta", "0.3"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "verify", "--depth", "12"]), EXIT_USAGE);
    assert_eq!(run(["sparselab", "--config", "/nonexistent.json", "verify"]), EXIT_USAGE);
}

#[test]
fn failed_invariant_exits_one() {
    // a seeded random family whose children fill most of the parent
    assert_eq!(run(["sparselab", "verify", "--depth", "5", "--seed", "7"]), EXIT_FAIL);
}

#[test]
fn out_file_and_config_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("report.json");
    fs::write(&cfg, format!(r#"{{"n": [4, 8], "p": [1], "format": "json", "out": "{}"}}"#, out.display())).unwrap();
    assert_eq!(run(["sparselab", "--config", cfg.to_str().unwrap(), "sharpness"]), EXIT_PASS);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["id"], "sharpness");
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);

    let csv = dir.path().join("report.csv");
    let code = run(["sparselab", "--config", cfg.to_str().unwrap(), "sharpness", "--n", "4", "--format", "csv", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,m,depth,union_fraction,min_value,witness_p1\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(run(["sparselab", "--config", cfg.to_str().unwrap(), "dominate"]), EXIT_USAGE);
}

#[test]
fn verify_example_passes() {
    assert_eq!(run(["sparselab", "verify", "--dim", "1", "--depth", "8", "--seed", "1"]), EXIT_PASS);
}

#[test]
fn scaling_writes_one_row_per_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = ["scaling", "--p", "2", "--n", "2,4,8,16", "--ensemble", "shear", "--out", out.to_str().unwrap()];
    let res = bin(&args);
    assert_eq!(res.status.code(), Some(EXIT_PASS));
    assert_eq!(String::from_utf8_lossy(&res.stdout).lines().count(), 1);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(!text.contains('\r'));
}

#[test]
fn unknown_flag_prints_usage() {
    let out = bin(&["tail", "--colour", "blue"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}
