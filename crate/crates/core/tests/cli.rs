use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarmub")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polarmub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sr_construction_reports_a_complete_partial_spread() {
    let out = run(&["construct", "--d", "3", "--n", "2", "--method", "sr", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["claims_hold"], true);
    assert_eq!(v["result"]["spread"]["size"], 8);
    assert_eq!(v["result"]["completeness"]["complete"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "--d", "3", "--n", "2", "--mode", "exhaustive", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("elapsed_ms"));
}

#[test]
fn brute_force_conjecture_on_w52() {
    let out = run(&["conjecture", "--d", "2", "--n", "3", "--brute-force"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["report"]["verdict"], "Equality");
    assert_eq!(v["result"]["brute_force"]["claim"], "ExactlyOne");
    assert_eq!(v["result"]["brute_force"]["exactly_one"], 126);
}

#[test]
fn mub_from_classical_spread() {
    let out = run(&["mub", "--d", "2", "--n", "2", "--from-spread", "classical"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cert = &v["result"]["certificate"];
    assert_eq!(cert["order"], 5);
    assert_eq!(cert["valid"], true);
    assert!(cert["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn incomplete_file_fails_the_completeness_check() {
    let path = scratch("two_lines.txt");
    std::fs::write(&path, "# d=2 n=2\n1,0,0,0|0,0,1,0\n0,1,0,0|0,0,0,1\n").unwrap();
    let out = run(&["verify", "--d", "2", "--n", "2", "--check", "complete", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["claims_hold"], false);
}

#[test]
fn usage_errors_exit_with_one() {
    let out = run(&["construct", "--d", "4", "--n", "2", "--method", "classical"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["construct", "--d", "2", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn emitted_spread_feeds_back_into_verify() {
    let out = run(&["construct", "--d", "3", "--n", "2", "--method", "classical"]);
    assert_eq!(out.status.code(), Some(0));
    let spread = json(&out)["result"]["spread"].clone();
    let path = scratch("classical.json");
    let p = path.to_str().unwrap();
    std::fs::write(&path, spread.to_string()).unwrap();
    for check in ["complete", "regularity", "class-roundtrip"] {
        let out = run(&["verify", "--d", "3", "--n", "2", "--check", check, "--input", p]);
        assert_eq!(out.status.code(), Some(0), "{check}");
    }
}

#[test]
fn text_format_and_out_flag() {
    let path = scratch("report.txt");
    let p = path.to_str().unwrap();
    let out = run(&["conjecture", "--d", "3", "--n", "2", "--format", "text", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.report.verdict:") && l.contains("Violated")));
}

#[test]
fn empty_first_of_size_search_exits_with_two() {
    let out = run(&["search", "--d", "2", "--n", "2", "--mode", "first-of-size", "--target", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
