use std::path::Path;
use std::process::{Command, Output};

fn crossworld(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossworld")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {text}"))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

const EXTREME: &str = r#"{"model": {"outcome": "binary", "alpha0": -3.5, "alpha1": 0.5, "alpha2": 2.5,
  "beta0": -4.0, "beta1": -1.0, "beta2": 3.5, "beta3": 3.25, "beta4": 3.0, "beta5": -5.0}}"#;

#[test]
fn truth_bounds_and_estimate() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), EXTREME).unwrap();
    let o = crossworld(&["truth", "--config", "m.json"], dir.path());
    assert!(o.status.success());
    let t = stdout(&o);
    assert!((value(&t, "bias_nde") + 0.178975).abs() < 1e-5);
    assert_eq!(value(&t, "bias_nie"), -value(&t, "bias_nde"));

    let o = crossworld(&["bounds", "--config", "m.json"], dir.path());
    let b = stdout(&o);
    assert!(value(&b, "lower") <= value(&b, "true_nde") && value(&b, "true_nde") <= value(&b, "upper"));

    let o = crossworld(&["simulate", "--config", "m.json", "--n", "5000", "--seed", "3", "--out", "d.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let e1 = stdout(&crossworld(&["estimate", "--data", "d.csv"], dir.path()));
    let e2 = stdout(&crossworld(&["estimate", "--data", "d.csv"], dir.path()));
    assert_eq!(e1, e2);
    assert_eq!(value(&e1, "n"), 5000.0);
    assert!(stdout(&crossworld(&["bounds", "--data", "d.csv"], dir.path())).contains("lower="));
}

#[test]
fn simulate_is_deterministic_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), EXTREME).unwrap();
    let run = |seed: &str| stdout(&crossworld(&["simulate", "--config", "m.json", "--n", "300", "--seed", seed, "--counterfactuals"], dir.path()));
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
    assert!(run("1").starts_with("A,M,Y,cf_u,"));
}

#[test]
fn grid_summarize_and_figure5() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"grid": {"outcome": "binary", "values": {"alpha1": [0.5], "beta0": [-0.4], "beta1": [0.7], "beta2": [0.6]}}}"#;
    std::fs::write(dir.path().join("g.json"), cfg).unwrap();
    let o = crossworld(&["grid", "--config", "g.json", "--jobs", "2", "--out", "rows.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("evaluating"));
    let rows = std::fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 4 * 4 * 4 * 5 * 4);

    let s = stdout(&crossworld(&["summarize", "--config", "g.json", "--data", "rows.csv"], dir.path()));
    assert!(s.contains("[worst cases]") && s.contains("extreme"));
    assert_eq!(value(&s, "settings"), 1280.0);

    let f = stdout(&crossworld(&["figure5", "--config", "g.json", "--data", "rows.csv", "--points", "3"], dir.path()));
    assert_eq!(f.lines().count(), 1 + 2 * 2 * 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(crossworld(&["truth"], p).status.code(), Some(2));
    assert_eq!(crossworld(&["truth", "--config", "nope.json"], p).status.code(), Some(2));
    std::fs::write(p.join("bad.json"), r#"{"model": {"outcome": "binary", "beta6": 1}}"#).unwrap();
    let o = crossworld(&["truth", "--config", "bad.json"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta6"));
    assert_eq!(crossworld(&["no-such-command"], p).status.code(), Some(2));

    std::fs::write(p.join("bad.csv"), "A,M,Y\n0,0,1\n1,1,0\n0,1,1\n2,0,1\n").unwrap();
    let o = crossworld(&["estimate", "--data", "bad.csv"], p);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));

    std::fs::write(p.join("gap.csv"), "A,M,Y\n0,0,1\n0,1,0\n1,0,1\n").unwrap();
    assert_eq!(crossworld(&["estimate", "--data", "gap.csv"], p).status.code(), Some(3));

    std::fs::write(p.join("flat.csv"), "A,L,M,Y\n1,0,0,1\n1,1,2,0\n1,2,1,1\n").unwrap();
    assert_eq!(crossworld(&["lsem", "--data", "flat.csv"], p).status.code(), Some(4));
}

#[test]
fn audit_and_lsem_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), EXTREME).unwrap();
    let a = stdout(&crossworld(&["audit", "--config", "m.json", "--n", "200000", "--seed", "1"], dir.path()));
    assert!(a.contains("cross_world_holds=false"));
    assert!(a.contains("single_world_holds=true"));
    std::fs::write(dir.path().join("l.json"), r#"{"lsem": {"alpha_a": 2, "beta_a": 1, "beta_l": 0.5, "theta_a": 1, "theta_l": 1, "theta_m": 1}}"#).unwrap();
    let l = stdout(&crossworld(&["lsem", "--config", "l.json", "--n", "100000"], dir.path()));
    assert!((value(&l, "nde") - 3.0).abs() < 0.1);
    assert!((value(&l, "nie") - 2.0).abs() < 0.1);
}
