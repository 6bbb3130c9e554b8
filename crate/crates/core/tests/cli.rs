use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twisted-hh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_job(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const LAMBDA2: &str = r#"{"algebras": {"L": {"constructor": "truncated_polynomial", "m": 2}}, "command": "compute-hh"}"#;

#[test]
fn compute_hh_of_dual_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "job.json", LAMBDA2);
    let out = cli(&["--job", &job, "--field", "Q", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("dims: 2 1 1 1"), "{}", stdout(&out));
}

#[test]
fn verify_qci_reports_brackets() {
    let out = cli(&["verify-qci", "--m", "2", "--n", "2", "--field", "Qq", "--max-degree", "4", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["result"]["dims"], serde_json::json!([2, 2, 1, 0, 0]));
    let vu = v["result"]["bracket_table"].as_array().unwrap().iter().filter(|e| e["left"] == "V" && e["right"] == "U").collect::<Vec<_>>();
    assert_eq!(vu.len(), 3);
    assert!(vu.iter().all(|e| e["expression"] == "U"));
}

#[test]
fn failed_verification_exits_with_one() {
    // q = 1 is a root of unity, so the presentation does not hold
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "job.json", r#"{"field": "Q", "command": "verify-qci", "options": {"m": 2, "n": 2, "q": ["1"]}}"#);
    let out = cli(&["--job", &job, "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed: dimensions"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(&dir, "bad.json", r#"{"algebras": {"L": {"constructor": "truncated_polynomial"}}, "command": "validate"}"#);
    let out = cli(&["--job", &job]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["validate", "--field", "Fp:4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        &dir,
        "job.json",
        r#"{"field": "Qq", "algebras": {"R": {"constructor": "truncated_polynomial", "m": 2, "var": "x"}, "S": {"constructor": "truncated_polynomial", "m": 3, "var": "y"}},
            "bicharacter": {"left": "R", "right": "S", "values": [["q"]]}, "command": "decompose", "options": {"max_degree": 3}}"#,
    );
    let first = cli(&["--job", &job, "--output", "json"]);
    assert_eq!(first.status.code(), Some(0));
    let report = write_job(&dir, "report.json", &stdout(&first));
    let second = cli(&["--job", &report, "--output", "json"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    let v: Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(v["result"]["dims_decomposition"], v["result"]["dims_product"]);
}

#[test]
fn output_is_deterministic() {
    let a = cli(&["cup-table", "--job", "/dev/stdin"]);
    assert_eq!(a.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        &dir,
        "job.json",
        r#"{"field": "Fp:5", "algebras": {"R": {"constructor": "truncated_polynomial", "m": 2, "var": "x"}, "S": {"constructor": "truncated_polynomial", "m": 2, "var": "y"}},
            "bicharacter": {"left": "R", "right": "S", "values": [["2"]]}, "command": "bracket-table", "options": {"max_degree": 2}}"#,
    );
    let runs: Vec<String> = [Some("1"), Some("4"), None]
        .iter()
        .map(|t| {
            let mut args = vec!["--job", job.as_str(), "--output", "json"];
            if let Some(t) = t {
                args.extend(["--threads", t]);
            }
            let out = cli(&args);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            stdout(&out)
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}
