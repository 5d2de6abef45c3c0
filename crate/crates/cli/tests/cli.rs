use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitsum")).args(args).output().unwrap()
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitsum")).args(args).env(key, value).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn alpha_weights_json() {
    let out = run(&["weights", "--base", "2", "--order", "2", "--kind", "alpha"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["kind"], "alpha");
    assert_eq!(v["N"], 2);
    let values: Vec<&str> = v["values"].as_array().unwrap().iter().map(|c| c[0].as_str().unwrap()).collect();
    assert_eq!(values, ["1", "2", "2", "2", "1"]);
}

#[test]
fn beta_weights_csv() {
    let out = run(&["weights", "--base", "3", "--order", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,xi^0,xi^1");
    assert_eq!(lines.len(), 1 + 7);
}

#[test]
fn verify_single_identity() {
    let out = run(&[
        "verify", "--identity", "power-closed-form", "--base", "2", "--order", "3", "--params", "x=0", "y=1",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["rhs"][0]["coeffs"][0], "-48");
    assert!(v["elapsed_ms"].is_null());
    let timed = json(&run(&["verify", "--identity", "beta-alpha", "--order", "3", "--timings"]));
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn mismatch_exits_one() {
    // A cubic is outside the degree bound for N = 3.
    let out = run(&[
        "verify", "--identity", "generalized-pte", "--base", "2", "--order", "3", "--params", "f=0,0,0,1", "x=1", "y=1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["equal"], false);
    let out = run(&["pte-show", "--base", "2", "--order", "3", "--x", "0", "--y", "1", "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--identity", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--identity", "weighted-difference"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--order", "2", "--unknown"]).status.code(), Some(2));
    let out = run(&["verify", "--identity", "h2n", "--order", "2", "--params", "x1=1", "x2=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn cost_cap_exits_three() {
    let args = ["verify", "--identity", "weighted-difference", "--base", "2", "--order", "12"];
    assert_eq!(run(&[&args[..], &["--max-cost", "2^10"]].concat()).status.code(), Some(3));
    assert_eq!(run_env(&args, "DIGITSUM_MAX_COST", "1000").status.code(), Some(3));
    assert_eq!(run(&[&args[..], &["--max-cost", "2^20"]].concat()).status.code(), Some(0));
    assert_eq!(run(&["pte-show", "--base", "2", "--order", "11", "--x", "1", "--y", "1", "--max-cost", "1024"]).status.code(), Some(3));
}

#[test]
fn pte_search_ranks_known_solution() {
    let out = run(&["pte-search", "--base", "2", "--order", "3", "--x-grid", "0,1", "--y-grid", "1", "--top", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols[0]["x"], "1");
    assert_eq!(sols[0]["reduced_size"], 6);
    assert_eq!(sols[1]["reduced_size"], 8);
    let csv = run(&["pte-search", "--base", "2", "--order", "3", "--x-grid", "-1..1/1/2", "--y-grid", "1", "--format", "csv"]);
    assert!(csv.status.success());
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("rank,x,y,reduced_size,classes"));
}

#[test]
fn bernoulli_text_and_json() {
    let out = run(&["bernoulli", "--degree", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "B_2(x) = x^2 - x + 1/6");
    let v = json(&run(&["bernoulli", "--degree", "1", "--format", "json"]));
    assert_eq!(v["coeffs"], serde_json::json!(["-1/2", "1"]));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("digitsum-cli-{}.json", std::process::id()));
    let out = run(&["bernoulli", "--degree", "3", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["degree"], 3);
    std::fs::remove_file(path).unwrap();
}
