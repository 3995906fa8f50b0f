use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn ecoepi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecoepi")).args(args).output().unwrap()
}

#[test]
fn threshold_reports_extinction_regime() {
    let cfg = config("paper_gamma045.cfg");
    let out = ecoepi(&["threshold", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.92"), "threshold missing from: {text}");
    assert!(text.contains("Extinction"), "regime missing from: {text}");
}

#[test]
fn find_orbit_reproduces_the_endemic_study_point() {
    let cfg = config("paper_gamma060.cfg");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let out = ecoepi(&["find-orbit", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,S,I,Y"));
    let first: Vec<f64> =
        lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    for (got, want) in first[1..].iter().zip([1.082, 0.065, 0.799]) {
        assert!((got - want).abs() < 0.01, "t = 0 row {first:?}");
    }
}

#[test]
fn find_orbit_refuses_the_extinction_regime() {
    let cfg = config("paper_gamma045.cfg");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let out = ecoepi(&["find-orbit", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn bounds_prints_a_negative_determinant() {
    let cfg = config("paper_gamma060.cfg");
    let out = ecoepi(&["bounds", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sign negative"), "determinant sign missing from: {text}");
}

#[test]
fn simulate_csv_round_trips_byte_identically() {
    let cfg = config("paper_gamma045.cfg");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = ecoepi(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--init",
        "xi1",
        "--t-end",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut rebuilt = String::from("t,S,I,Y\n");
    for line in text.lines().skip(1) {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        rebuilt.push_str(&format!("{},{},{},{}\n", vals[0], vals[1], vals[2], vals[3]));
    }
    assert_eq!(text, rebuilt);
}

#[test]
fn literal_initial_conditions_are_accepted() {
    let cfg = config("paper_gamma045.cfg");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = ecoepi(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--init",
        "1.5,0.2,0.4",
        "--t-end",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn broken_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.cfg");
    std::fs::write(&cfg, "omega = 1\nbeta = harmonic oops 0.7 0\n").unwrap();
    let out = ecoepi(&["threshold", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn missing_config_exits_with_code_1() {
    let out = ecoepi(&["threshold", "--config", "/nonexistent/nope.cfg"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn report_covers_the_full_pipeline() {
    let cfg = config("paper_gamma060.cfg");
    let dir = tempfile::tempdir().unwrap();
    let out = ecoepi(&["report", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    for needle in ["threshold", "endemic orbit", "a priori bounds", "Permanence"] {
        assert!(summary.contains(needle), "missing {needle:?} in summary");
    }
    for file in ["orbit_o2.csv", "endemic_orbit.csv", "sim_xi1.csv", "sim_xi2.csv"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
}
