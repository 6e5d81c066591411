use std::path::Path;
use std::process::{Command, Output};

fn z2n(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2n")).args(args).output().expect("spawn z2n")
}

const FOCUS_EXAMPLE: [&str; 10] = ["--p1", "1", "--p2", "1", "--s1", "-0.5", "--s2", "2", "--n", "2"];

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn analyze_json() {
    let mut args = vec!["analyze", "--format", "json"];
    args.extend(FOCUS_EXAMPLE);
    let v = json(&z2n(&args));
    assert_eq!(v["quadratic_forms"]["q"].as_f64(), Some(-4.25));
    assert_eq!(v["equilibrium_count"]["count"].as_u64(), Some(1));
    assert_eq!(v["infinity"]["stability"].as_str(), Some("repeller"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(z2n(&["analyze", "--p1", "1"]).status.code(), Some(2));
    assert_eq!(z2n(&["analyze", "--p1", "x", "--p2", "1", "--s1", "0", "--s2", "2"]).status.code(), Some(2));
    assert_eq!(z2n(&["bogus"]).status.code(), Some(2));
    let mut args = vec!["sweep", "--nx", "0"];
    args.extend(FOCUS_EXAMPLE);
    assert_eq!(z2n(&args).status.code(), Some(2));
    assert!(z2n(&["--help"]).status.success());
}

fn sweep_csv(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = dir.join(name);
    let mut args = vec!["sweep", "--nx", "1", "--ny", "2", "--verify", "2", "--seed", "7", "--out", out.to_str().unwrap()];
    args.extend(FOCUS_EXAMPLE);
    args.extend(extra);
    let o = z2n(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn sweep_is_deterministic_and_tiny_grids_work() {
    let dir = tempfile::tempdir().unwrap();
    let a = sweep_csv(dir.path(), "a.csv", &[]);
    let b = sweep_csv(dir.path(), "b.csv", &[]);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("i,j,x,y,p1,p2,s1,s2,n,q,"));
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "p1 = 1.0\np2 = 1.0\ns1 = -0.5\ns2 = 2.0\nn = 3\nformat = \"json\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&z2n(&["analyze", "--config", cfg]));
    assert_eq!(v["params"]["n"].as_u64(), Some(3));
    let v = json(&z2n(&["analyze", "--config", cfg, "--n", "5"]));
    assert_eq!(v["params"]["n"].as_u64(), Some(5));

    std::fs::write(dir.path().join("bad.toml"), "p9 = 1.0\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(z2n(&["analyze", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cycle_continuation() {
    let q0 = ["--p1", "0.7675918792439982", "--p2", "-1", "--s1", "-0.5", "--s2", "2", "--n", "2"];
    let mut args = vec!["cycle", "--format", "json", "--continue", "+"];
    args.extend(q0);
    let v = json(&z2n(&args));
    assert_eq!(v["continuation"]["cycle"]["enclosed_equilibria"].as_u64(), Some(9));
    args[4] = "-";
    let v = json(&z2n(&args));
    assert_eq!(v["continuation"]["cycle"]["enclosed_equilibria"].as_u64(), Some(1));
}
