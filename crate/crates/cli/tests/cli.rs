use std::path::Path;

use serde_json::Value;

fn run(args: &[&str]) -> i32 {
    run_env(args, &|_| None)
}

fn run_env(args: &[&str], env: &dyn Fn(&str) -> Option<String>) -> i32 {
    ldgraphs::run_with_env(std::iter::once("ldgraphs").chain(args.iter().copied()), env)
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

fn manifest(dir: &Path, command: &str) -> Value {
    serde_json::from_str(&read(dir, &format!("{command}.manifest.json"))).unwrap()
}

fn out(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

#[test]
fn enumerate_triangle_example() {
    let d = tempfile::tempdir().unwrap();
    let code = run(&["enumerate", "--pattern", "C3", "--N", "4", "--p", "0.5", "--t-abs", "6", "--out", out(d.path())]);
    assert_eq!(code, 0);
    let csv = read(d.path(), "enumerate.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("#schema=1"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("probability"), "0.359375");
    assert_eq!(col("fraction"), "23/64");
    assert_eq!(col("seed"), "0");
    assert_eq!(col("config_hash").len(), 16);
    let m = manifest(d.path(), "enumerate");
    assert_eq!(m["command"], "enumerate");
    assert_eq!(m["config_hash"], col("config_hash"));
}

#[test]
fn same_seed_same_bytes_across_threads() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = |d: &Path, threads: &'static str| {
        let mut v = vec!["mc", "--stat", "edges", "--N", "6", "--p", "0.5", "--dir", "le", "--t-abs", "3"];
        v.extend(["--tilt", "product(0.2)", "--samples", "20000", "--seed", "5", "--threads", threads, "--out"]);
        run(&[v, vec![out(d)]].concat())
    };
    assert_eq!(args(a.path(), "1"), 0);
    assert_eq!(args(b.path(), "4"), 0);
    assert_eq!(read(a.path(), "mc.csv"), read(b.path(), "mc.csv"));
}

#[test]
fn different_seed_changes_hash() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(&["rate", "--points", "3", "--seed", "1", "--out", out(a.path())]), 0);
    assert_eq!(run(&["rate", "--points", "3", "--seed", "2", "--out", out(b.path())]), 0);
    assert_ne!(manifest(a.path(), "rate")["config_hash"], manifest(b.path(), "rate")["config_hash"]);
}

#[test]
fn rate_grid_has_requested_points() {
    let d = tempfile::tempdir().unwrap();
    let code = run(&["rate", "--pattern", "C4", "--u-min", "0.1", "--u-max", "10", "--points", "5", "--out", out(d.path())]);
    assert_eq!(code, 0);
    assert_eq!(read(d.path(), "rate.csv").lines().count(), 2 + 5);
}

#[test]
fn flag_beats_env_beats_config() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("config.json");
    std::fs::write(&cfg, r#"{"seed": 3, "threads": 2, "enumerate": {"N": 3, "t-abs": 0}}"#).unwrap();
    let env = |k: &str| (k == "LDG_SEED").then(|| "9".to_string());

    let o1 = d.path().join("o1");
    assert_eq!(run_env(&["--config", cfg.to_str().unwrap(), "enumerate", "--out", o1.to_str().unwrap()], &env), 0);
    let m = manifest(&o1, "enumerate");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["threads"], 2);
    assert_eq!(m["config"]["N"], 3);

    let o2 = d.path().join("o2");
    let argv = ["--config", cfg.to_str().unwrap(), "enumerate", "--seed", "4", "--N", "4", "--out", o2.to_str().unwrap()];
    assert_eq!(run_env(&argv, &env), 0);
    let m = manifest(&o2, "enumerate");
    assert_eq!(m["seed"], 4);
    assert_eq!(m["config"]["N"], 4);
}

#[test]
fn usage_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, r#"{"enumerate": {"no-such-key": 1}}"#).unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "enumerate", "--t-abs", "1"]), 2);
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "enumerate", "--t-abs", "1"]), 2);
    assert_eq!(run(&["enumerate", "--N", "12", "--t-abs", "1"]), 2);
    assert_eq!(run(&["enumerate", "--p", "1.5", "--t-abs", "1"]), 2);
    assert_eq!(run(&["no-such-command"]), 2);
    assert_eq!(run(&["mc", "--tilt", "wobbly(3)", "--t-abs", "1"]), 2);
}

#[test]
fn assertion_commands_exit_zero_when_checks_hold() {
    assert_eq!(run(&["netcheck", "--suite", "k2", "--suite", "perturbation", "--N", "8", "--r", "2", "--trials", "5"]), 0);
    assert_eq!(run(&["verify", "--only", "1", "--only", "2"]), 0);
}
