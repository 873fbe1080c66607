//! End-to-end CLI checks: exit codes, error surfaces, format contracts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bds-lab"))
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn dim_reports_value_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    write(&class, r#"{"k": 3, "n": 2, "hypotheses": [[1,1],[1,2],[2,1]]}"#);
    let out = run(&["dim", "--class", class.to_str().unwrap(), "--kind", "bds"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["data"]["report"]["value"], 1);
    assert!(json["data"]["report"]["witness"]["PseudoBox"].is_object());
    assert_eq!(json["meta"]["tool"], "bds-lab");
}

#[test]
fn dim_ds_l_requires_list_size() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    write(&class, r#"{"k": 2, "n": 1, "hypotheses": [[1],[2]]}"#);
    let out = run(&["dim", "--class", class.to_str().unwrap(), "--kind", "ds-l"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--list-size"));
}

#[test]
fn missing_file_is_a_clean_error() {
    let out = run(&["dim", "--class", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn learn_rejects_non_realizable_samples() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    let sample = dir.path().join("sample.json");
    write(&class, r#"{"k": 2, "n": 2, "hypotheses": [[1,1],[2,2]]}"#);
    write(&sample, "[[0,1],[1,2]]");
    let out = run(&[
        "learn", "--class", class.to_str().unwrap(), "--sample", sample.to_str().unwrap(),
        "--list-size", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("realizable"));
}

#[test]
fn learn_predicts_from_csv_class() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.csv");
    let sample = dir.path().join("sample.json");
    write(&class, "1,1\n2,2\n");
    write(&sample, "[[0,2]]");
    let out = run(&[
        "learn", "--class", class.to_str().unwrap(), "--sample", sample.to_str().unwrap(),
        "--list-size", "1", "--query", "1",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["data"]["predictions"][0]["instance"], 1);
    assert_eq!(json["data"]["predictions"][0]["list"][0], 2);
}

#[test]
fn cascade_rejects_bad_environment() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    let env = dir.path().join("env.json");
    write(&class, r#"{"k": 2, "n": 2, "hypotheses": [[1,1],[2,2]]}"#);
    // masses do not sum to one
    write(&env, r#"{"masses": ["1/2", "1/3"], "target": [1, 1]}"#);
    let out = run(&[
        "cascade", "--class", class.to_str().unwrap(), "--env", env.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("masses"));
    // target not in the class
    write(&env, r#"{"masses": ["1/2", "1/2"], "target": [1, 2]}"#);
    let out = run(&[
        "cascade", "--class", class.to_str().unwrap(), "--env", env.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hard_warns_on_decimal_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    write(&class, r#"{"k": 2, "n": 2, "hypotheses": [[1,1],[1,2]]}"#);
    let out = run(&[
        "hard", "--class", class.to_str().unwrap(), "--two-point", "--epsilon", "0.125",
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning") && stderr.contains("1/8"));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["data"]["instance"]["masses"][0], "3/4");
    assert_eq!(json["data"]["instance"]["masses"][1], "1/4");
    assert!(json["data"]["lower_bound_budget"].is_null());
}

#[test]
fn verify_exits_zero_and_prints_summaries() {
    let out = run(&["verify", "--suite", "lower-bound", "--trials", "50", "--classes", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[PASS] lower-bound"));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["data"]["all_passed"], true);
}

#[test]
fn sweep_supports_json_format_and_rejects_csv_elsewhere() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    let env = dir.path().join("env.json");
    write(&class, r#"{"k": 2, "n": 1, "hypotheses": [[1],[2]]}"#);
    write(&env, r#"{"masses": [1.0], "target": [2]}"#);
    let out = run(&[
        "sweep", "--class", class.to_str().unwrap(), "--env", env.to_str().unwrap(),
        "--epsilons", "0.2", "--multipliers", "0.05", "--trials", "4", "--format", "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["data"][0]["budget"].as_u64().unwrap() > 0);

    let out = run(&["dim", "--class", class.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orient_emits_selected_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    write(&class, r#"{"k": 3, "n": 1, "hypotheses": [[1],[2],[3]]}"#);
    let out = run(&[
        "orient", "--class", class.to_str().unwrap(), "--seq", "0", "--list-size", "2",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["data"]["max_outdegree"], 1);
    assert_eq!(json["data"]["edges"][0]["selected"], serde_json::json!([[1], [2]]));
}
