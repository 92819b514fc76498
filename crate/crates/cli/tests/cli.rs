use std::process::{Command, Output};

use serde_json::Value;

fn zsweight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zsweight"))
        .args(args)
        .env_remove("ZSWEIGHT_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn davenport_z8_pm1() {
    let out = zsweight(&["davenport", "--group", "8", "--weights", "1,7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 4);
    assert_eq!(v["witness"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn negative_weights_parse() {
    let out = zsweight(&["davenport", "--group", "100", "--weights", "-2--1,1,2"]);
    assert_eq!(json(&out)["value"], 5);
}

#[test]
fn fd_infinite_on_klein_group() {
    let out = zsweight(&["fd", "--group", "2x2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "INFINITE");
    let out = zsweight(&["fd", "--group", "7", "--k", "2"]);
    let v = json(&out);
    assert_eq!((v["status"].as_str(), v["value"].as_u64()), (Some("FINITE"), Some(3)));
}

#[test]
fn budget_gives_exit_2() {
    let out = zsweight(&["fd", "--group", "31", "--k", "2", "--budget-nodes", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "UNKNOWN");
    let out = zsweight(&["davenport", "--group", "64", "--weights", "1,2", "--budget-nodes", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "UNKNOWN");
}

#[test]
fn parse_errors_exit_64() {
    for args in [
        vec!["davenport", "--group", "8"],
        vec!["davenport", "--group", "8", "--weights", "1", "--bogus"],
        vec!["frobnicate"],
        vec!["davenport", "--group", "0", "--weights", "1"],
        vec!["davenport", "--group", "8", "--weights", "0"],
        vec!["sweep", "--p", "31", "--k", "2", "--theta", "0.1:0.2", "--trials", "3"],
    ] {
        let out = zsweight(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(zsweight(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let out = zsweight(&["verify", "known-formulas", "--max-n", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
    let out = zsweight(&["verify", "dual-max", "--p", "7", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"][0]["computed"], "4");
    let out = zsweight(&["verify", "relations", "--p", "3", "--m", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = zsweight(&["verify", "singer", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = zsweight(&["verify", "singer", "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violated"));
}

#[test]
fn pretty_output_is_a_table() {
    let out = zsweight(&["--pretty", "verify", "pair-lemma", "--n-max", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite: pair-lemma"));
    assert!(text.lines().any(|l| l.starts_with("computed")));
}

#[test]
fn construct_reports() {
    let v = json(&zsweight(&["construct", "interval", "--p", "11"]));
    assert_eq!(v["weight_set"]["residues"], serde_json::json!([1, 2, 3, 8, 9, 10]));
    assert_eq!(v["verified_bound"]["method"], "ratio-criterion");
    let v = json(&zsweight(&["construct", "singer", "--q", "3"]));
    assert_eq!(v["census_exact"], true);
    let v = json(&zsweight(&["construct", "quartic", "--p", "211", "--seed", "2"]));
    assert_eq!(v["verified_bound"]["k"], 4);
    assert_eq!(v["construction"]["parameters"]["seed"], 2);
    let out = zsweight(&["construct", "complement", "--p", "13", "--r", "1"]);
    assert_eq!(json(&out)["verified_bound"]["k"], 2);
    let out = zsweight(&["construct", "quartic", "--p", "101", "--c0", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let log = dir.path().join("log.jsonl");
    let run = |threads: &str| {
        zsweight(&[
            "sweep", "--p", "31", "--k", "2", "--theta", "0.1:0.5:3", "--trials", "20", "--seed", "4",
            "--out", csv.to_str().unwrap(), "--log", log.to_str().unwrap(), "--threads", threads,
        ])
    };
    let a = run("1");
    assert_eq!(a.status.code(), Some(0));
    let csv1 = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv1.lines().next().unwrap(), "theta,p_le,p_eq,mean_size,empty,trials");
    assert_eq!(csv1.lines().count(), 4);
    let b = run("3");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), csv1);
    assert_eq!(json(&a)["rows"], json(&b)["rows"]);
    let records: Vec<Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["command"], "sweep");
    assert_eq!(records[0]["provenance"]["seed"], 4);
    assert_eq!(records[1]["provenance"]["threads"], 3);
    assert_eq!(records[0]["normalized_input"]["theta_grid"].as_array().unwrap().len(), 3);
}

#[test]
fn thread_env_var_and_flag_agree() {
    let by_flag = zsweight(&["fd", "--group", "13", "--k", "2", "--threads", "2"]);
    let by_env = Command::new(env!("CARGO_BIN_EXE_zsweight"))
        .args(["fd", "--group", "13", "--k", "2"])
        .env("ZSWEIGHT_THREADS", "1")
        .output()
        .unwrap();
    let (mut a, mut b) = (json(&by_flag), json(&by_env));
    a["stats"]["elapsed_ms"] = Value::Null;
    b["stats"]["elapsed_ms"] = Value::Null;
    assert_eq!(a, b);
}
