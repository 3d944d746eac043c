use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov-approx")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn spectrum_csv() {
    let out = run(&["spectrum", "--below", "3", "--max-m", "13", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.split('\n').collect();
    assert_eq!(lines[0], "m,x,y,z,k,l,lagrange_point,tilde_point");
    assert_eq!(lines[3], "5,1,2,5,2,1,(0 + 1*sqrt(221))/5,(15 + 1*sqrt(221))/10");
    assert_eq!(lines[4], "13,1,5,13,5,2,(0 + 1*sqrt(1517))/13,(39 + 1*sqrt(1517))/26");
    assert_eq!(lines.last(), Some(&""));
    assert!(!text.contains('\r'));
}

#[test]
fn decimal_columns_are_marked() {
    let v = json(&["spectrum", "--max-m", "2", "--decimal", "4"]);
    assert_eq!(v[1]["decimal_debug"]["lagrange_point"], "2.8284");
    let out = run(&["forms", "--m", "5", "--csv", "--decimal", "3"]);
    let header = String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string();
    assert!(header.ends_with("lagrange_point_decimal_debug,tilde_point_decimal_debug"));
}

#[test]
fn count_with_oracle() {
    let v = json(&["count", "[0;(1)]", "--oracle", "10000"]);
    assert_eq!(v, serde_json::json!({"count": 0, "oracle_agrees": true}));
    let v = json(&["count", "[0; 3, (2, 2, 1, 1)]"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["N"], 3);
    assert_eq!(v["witnesses"][1]["q"], "7");
    assert_eq!(json(&["count", "[0; (3)]"])["count"], "infinite");
}

#[test]
fn classify_report() {
    let v = json(&["classify", "[0; 3, (2, 2, 1, 1)]"]);
    assert_eq!(v["shape"], "beta_power");
    assert_eq!(v["pair"]["alpha"], "a");
    assert_eq!(v["pair"]["beta"], "ab");
    assert_eq!(v["side_condition"], true);
}

#[test]
fn tilde_values() {
    assert_eq!(json(&["tilde", "[0;(2)]"])["value"], "(3 + 2*sqrt(2))/2");
    assert_eq!(json(&["tilde", "[0; 1, 1, (2)]"])["value"], "(3 + 2*sqrt(2))/2");
}

#[test]
fn words_and_roots() {
    let v = json(&["words", "christoffel", "--mu", "2", "--nu", "3"]);
    assert_eq!(v["letters"], "aabab");
    assert_eq!(v["digits"], serde_json::json!([2, 2, 2, 2, 1, 1, 2, 2, 1, 1]));
    assert_eq!(json(&["words", "limit", "--path", "UUU", "--side", "alpha", "--n", "3"])["letters"], "abb");
    assert_eq!(json(&["words", "mechanical", "--slope", "(1 + 0*sqrt(0))/2", "--n", "4"])["letters"], "abab");
    let v = json(&["roots", "--m", "13", "--cf"]);
    assert_eq!(v[0]["theta"], "(-29 + 1*sqrt(1517))/26");
    assert_eq!(v[0]["cf"]["theta"], "[0; (2, 1, 1, 1, 1, 2)]");
    let t = json(&["triples", "--bound", "34"]);
    let zs: Vec<&str> = t.as_array().unwrap().iter().map(|r| r["z"].as_str().unwrap()).collect();
    assert_eq!(zs, ["1", "2", "5", "13", "29", "34"]);
}

#[test]
fn verify_is_deterministic_across_jobs() {
    let a = run(&["verify", "equal-value", "--depth", "6", "--jobs", "1"]);
    let b = run(&["verify", "equal-value", "--depth", "6", "--jobs", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checked"], 127);
}

#[test]
fn oracle_lists_solutions() {
    let v = json(&["oracle", "[0; 3, (2, 2, 1, 1)]", "--qmax", "100"]);
    assert_eq!(v["solutions"], serde_json::json!([{"p": "0", "q": "1"}, {"p": "2", "q": "7"}]));
    assert_eq!(v["agrees_with_convergents"], true);
}

#[test]
fn exit_codes() {
    let bad = run(&["count", "[0; 1, x]"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position 7"));
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["tilde", "[0;(1)]", "--csv"]).status.code(), Some(2));
    assert_eq!(run(&["forms", "--m", "7"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "[0; 2, 3]"]).status.code(), Some(1));
    assert_eq!(run(&["words", "limit", "--path", "U", "--side", "beta", "--n", "40"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_argv_identical_bytes() {
    for args in [&["classify", "[2; 4, (1, 1, 2, 2)]"][..], &["roots", "--m", "194", "--cf", "--csv"]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}
