use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FLIP: &str = r#"{"variant": "DiracCommutator", "d": {"dim": 2, "re": [[0, 1], [1, 0]]}}"#;

fn qmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn mk_scenario(solver: &str) -> String {
    format!(
        r#"{{
  "schema": 1,
  "name": "cli-mk",
  "algebra": {{"blocks": [1, 1]}},
  "lipnorms": {{"base": {FLIP}}},
  "solver": {solver},
  "experiment": {{
    "type": "mk",
    "lipnorm": "base",
    "pairs": [[{{"pure": 0}}, {{"pure": 1}}]],
    "random_pairs": 2
  }}
}}"#
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_writes_all_three_reports() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "mk.json", &mk_scenario(r#"{"seed": 3}"#));
    let out = tmp.path().join("out");
    let o = qmetric(&["run", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["results.csv", "report.json", "manifest.json"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    // Header plus the explicit pair and two random ones.
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn seed_override_is_recorded_and_changes_random_pairs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "mk.json", &mk_scenario(r#"{"seed": 3}"#));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(qmetric(&["run", path_str(&cfg), "--out", path_str(&a)]).status.code(), Some(0));
    let o = qmetric(&["run", path_str(&cfg), "--out", path_str(&b), "--seed", "99"]);
    assert_eq!(o.status.code(), Some(0));

    let seeds = &read_json(&b.join("manifest.json"))["seeds"];
    assert_eq!(seeds["solver"], 99);
    assert_eq!(seeds["overridden"], true);
    assert_eq!(read_json(&a.join("manifest.json"))["seeds"]["overridden"], false);
    assert_ne!(
        fs::read_to_string(a.join("results.csv")).unwrap(),
        fs::read_to_string(b.join("results.csv")).unwrap()
    );
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "mk.json", &mk_scenario(r#"{"seed": 5}"#));
    let csv = |jobs: &str| {
        let out = tmp.path().join(format!("jobs{jobs}"));
        let o = qmetric(&["run", path_str(&cfg), "--out", path_str(&out), "--jobs", jobs]);
        assert_eq!(o.status.code(), Some(0));
        fs::read_to_string(out.join("results.csv")).unwrap()
    };
    assert_eq!(csv("1"), csv("4"));
}

#[test]
fn empty_lipnorm_table_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let text = mk_scenario(r#"{"seed": 1}"#).replace(&format!(r#"{{"base": {FLIP}}}"#), "{}");
    let cfg = write(tmp.path(), "empty.json", &text);
    for cmd in ["validate", "run"] {
        let o = qmetric(&[cmd, path_str(&cfg)]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("lipnorms"));
    }
}

#[test]
fn validate_reports_every_problem() {
    let tmp = TempDir::new().unwrap();
    let text = r#"{
  "schema": 1,
  "name": "bad",
  "algebra": {"blocks": [1, 1]},
  "lipnorms": {"base": {"variant": "DiracCommutator", "d": {"dim": 3, "re": [[0, 1, 0], [1, 0, 0], [0, 0, 0]]}}},
  "solver": {"seed": 1},
  "experiment": {"type": "mk", "lipnorm": "missing", "pairs": [], "random_pairs": 1}
}"#;
    let cfg = write(tmp.path(), "bad.json", text);
    let o = qmetric(&["validate", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing"), "{err}");
    assert!(err.lines().count() >= 3, "{err}");

    let good = write(tmp.path(), "good.json", &mk_scenario(r#"{"seed": 1}"#));
    let o = qmetric(&["validate", path_str(&good)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("ok"));
}

#[test]
fn unreadable_or_unwritable_paths_exit_one() {
    let tmp = TempDir::new().unwrap();
    let o = qmetric(&["run", path_str(&tmp.path().join("absent.json"))]);
    assert_eq!(o.status.code(), Some(1));

    let cfg = write(tmp.path(), "mk.json", &mk_scenario(r#"{"seed": 1}"#));
    // A regular file where the output directory should go.
    let blocker = write(tmp.path(), "blocker", "");
    let o = qmetric(&["run", path_str(&cfg), "--out", path_str(&blocker.join("out"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nonconverged_rows_exit_three_and_are_still_written() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "starved.json",
        &mk_scenario(r#"{"seed": 1, "max_iter": 1, "tol": 1e-14}"#),
    );
    let out = tmp.path().join("out");
    let o = qmetric(&["run", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.contains("nonconverged"), "{csv}");
}

#[test]
fn oracle_brackets_the_two_point_distance() {
    let tmp = TempDir::new().unwrap();
    // sup Tr((δ0 - δ1) a) over the Lip-ball of the flip Dirac operator is 1.
    let problem = format!(
        r#"{{"ball": {{"algebra": {{"blocks": [1, 1]}}, "lipnorm": {FLIP}}},
            "problem": {{"max-linear": {{"dim": 2, "re": [[1, 0], [0, -1]]}}}},
            "resolution": 101}}"#
    );
    let path = write(tmp.path(), "problem.json", &problem);
    let o = qmetric(&["oracle", path_str(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let (value, bound) = (v["value"].as_f64().unwrap(), v["error_bound"].as_f64().unwrap());
    assert!(value <= 1.0 + 1e-12 && 1.0 - value <= bound, "{v}");

    let bad = write(tmp.path(), "bad.json", r#"{"ball": {}}"#);
    assert_eq!(qmetric(&["oracle", path_str(&bad)]).status.code(), Some(2));
}
