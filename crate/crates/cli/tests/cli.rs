use std::process::{Command, Output};

use serde_json::Value;

fn pzf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzf")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pzf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = pzf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    pzf(args).status.code().expect("exited normally")
}

/// Parses "p/q" or "p" into an f64 quotient of the two integers.
fn ratio(exact: &str) -> f64 {
    match exact.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => exact.parse().unwrap(),
    }
}

#[test]
fn cycle_four_is_exact() {
    let v = json(&["ept", "--graph", "cycle:4"]);
    assert_eq!(v["schema"], "pzf/1");
    assert_eq!(v["value"]["exact"], "7/3");
    assert!((v["value"]["decimal"].as_f64().unwrap() - 2.333333).abs() < 1e-6);
    assert_eq!(v["engine"], "exact");
    assert_eq!(v["best_start"], 0);
}

#[test]
fn star_center_start() {
    let v = json(&["ept", "--graph", "star:3", "--start", "0"]);
    assert_eq!(v["value"]["exact"], "105/38");
    assert!((v["value"]["decimal"].as_f64().unwrap() - 2.76316).abs() < 1e-5);
    assert_eq!(v["start"], serde_json::json!([0]));
    assert_eq!(v["states"], 8);
}

#[test]
fn monte_carlo_is_reproducible_across_runs_and_threads() {
    let base = ["ept", "--graph", "gnp:n=200,p=0.5,seed=1", "--mode", "mc", "--trials", "50000", "--seed", "9"];
    let first = stdout(&base);
    assert_eq!(stdout(&base), first);
    for threads in ["1", "3"] {
        let mut args = base.to_vec();
        args.extend(["--threads", threads]);
        assert_eq!(stdout(&args), first, "threads = {threads}");
    }
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["engine"], "mc");
    assert_eq!(v["trials"], 50000);
    assert!(v["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn decimals_round_trip_to_the_printed_rationals() {
    let cases: [&[&str]; 4] = [
        &["ept", "--graph", "star:4", "--start", "0"],
        &["lround", "--graph", "cycle:6", "--ell", "4"],
        &["throttle", "--graph", "path:5"],
        &["kangyi", "--graph", "spider:n=7,legs=3", "--start", "1"],
    ];
    for args in cases {
        let v = json(args);
        let r = v.get("value").or_else(|| v.get("probability")).unwrap();
        assert_eq!(r["decimal"].as_f64().unwrap(), ratio(r["exact"].as_str().unwrap()), "{args:?}");
    }
}

#[test]
fn kangyi_counterexample_from_edge_list_file() {
    let dir = std::env::temp_dir().join(format!("pzf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fork.txt");
    std::fs::write(&path, "5 4\n0 1\n1 2\n2 3\n2 4\n").unwrap();
    let file = path.to_str().unwrap();
    let a = json(&["kangyi", "--graph", file, "--start", "0"]);
    assert_eq!((a["probability"]["exact"].as_str(), a["k0"].as_u64()), (Some("8/9"), Some(3)));
    let b = json(&["kangyi", "--graph", file, "--start", "0,2"]);
    assert_eq!((b["probability"]["exact"].as_str(), b["k0"].as_u64()), (Some("5/9"), Some(1)));
    let empty = json(&["kangyi", "--graph", file, "--start", ""]);
    assert_eq!(empty["k0"], Value::Null);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generated_edge_list_reads_back() {
    let dir = std::env::temp_dir().join(format!("pzf-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let spec = "gnp:n=8,p=0.5,seed=3";
    std::fs::write(&path, stdout(&["gen", "--graph", spec])).unwrap();
    let from_file = json(&["pt", "--graph", path.to_str().unwrap(), "--start", "0", "--rule", "psd"]);
    let from_spec = json(&["pt", "--graph", spec, "--start", "0", "--rule", "psd"]);
    assert_eq!(from_file["rounds"], from_spec["rounds"]);
    assert_eq!(from_file["edges"], from_spec["edges"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_sweep_gives_one_row_per_value() {
    let out = stdout(&["ept", "--graph", "cycle:3", "--sweep", "n=3..7", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "graph,n,edges,value.exact,value.decimal,best_start,engine,states");
    let exact: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(exact, ["2", "7/3", "3", "10/3", "4"]);
}

#[test]
fn confidence_and_lround_values() {
    let c5 = json(&["confidence", "--graph", "cycle:5", "--alpha", "1/4"]);
    assert_eq!(c5["value"], 2);
    let p4 = json(&["confidence", "--graph", "path:4", "--start", "1", "--alpha", "0.6"]);
    assert_eq!(p4["value"], 3);
    let l = json(&["lround", "--graph", "path:4", "--start", "1", "--ell", "3"]);
    assert_eq!(l["value"]["exact"], "7/8");
}

#[test]
fn deterministic_parameters() {
    assert_eq!(json(&["zfnumber", "--graph", "cycle:6"])["value"], 2);
    let pt = json(&["pt", "--graph", "path:5", "--start", "2", "--rule", "psd"]);
    assert_eq!(pt["rounds"], 2);
    let stalled = json(&["pt", "--graph", "star:3", "--start", "1"]);
    assert_eq!((stalled["forcing"].as_bool(), stalled["rounds"].is_null()), (Some(false), true));
}

#[test]
fn auto_mode_falls_back_to_monte_carlo() {
    let out = pzf(&["ept", "--graph", "complete:30", "--trials", "500"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Monte Carlo"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["engine"], "mc");
}

#[test]
fn scan_report_fields() {
    let v = json(&["scan-kangyi", "--max-n", "5"]);
    assert!(v["violations_found"].as_u64().unwrap() >= 1);
    assert_eq!(v["instances_checked"], 31);
    assert!(v["violations"].as_array().unwrap().iter().all(|x| x["verified"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["ept"]), 2);
    assert_eq!(code(&["ept", "--graph", "cycle:4", "--bogus"]), 2);
    assert_eq!(code(&["ept", "--graph", "nonsense:4"]), 2);
    assert_eq!(code(&["ept", "--graph", "path:4", "--start", "7"]), 2);
    assert_eq!(code(&["confidence", "--graph", "path:4", "--alpha", "1"]), 2);
    assert_eq!(code(&["throttle", "--graph", "path:4", "--mode", "mc"]), 2);
    assert_eq!(code(&["ept", "--graph", "cycle:4", "--sweep", "n=9..3"]), 2);
    let capped = pzf(&["ept", "--graph", "complete:30", "--mode", "exact"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("--mode mc"));
    assert_eq!(code(&["ept", "--graph", "cycle:12", "--mode", "exact", "--max-states", "10"]), 3);
    assert_eq!(code(&["throttle", "--graph", "path:14", "--search-cap", "6"]), 3);
}
