use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adaptive-euler")).args(args).output().expect("spawn cli")
}

#[test]
fn run_writes_final_snapshot_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cli(&["run", "--problem", "smooth1d", "--mode", "quasi5", "--nx", "40", "--accuracy-mode", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csv.len(), 1);
    assert!(dir.path().join("summary.json").exists());
    assert!(dir.path().join("run.log").exists());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["nx"], 40);
    assert!(summary["min_p"].as_f64().unwrap() > 0.0);
}

#[test]
fn snapshots_flag_adds_intermediate_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cli(&["run", "--problem", "blast", "--nx", "40", "--t-final", "0.004", "--snapshots", "0.001,0.002", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let n = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(n, 3);
}

#[test]
fn unknown_problem_is_a_config_error() {
    let o = cli(&["run", "--problem", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("shock_density") && err.contains("vortex2d"), "{err}");
}

#[test]
fn bad_mode_and_snapshot_time_are_config_errors() {
    assert_eq!(cli(&["run", "--problem", "blast", "--mode", "weno"]).status.code(), Some(2));
    let o = cli(&["run", "--problem", "blast", "--nx", "20", "--snapshots", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unstable_time_step_is_a_blow_up() {
    let o = cli(&["run", "--problem", "blast", "--mode", "ldcu-minmod2", "--nx", "50", "--cfl", "4", "--t-final", "0.01"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn converge_prints_rates() {
    let o = cli(&["converge", "--problem", "smooth1d", "--meshes", "40,80,160", "--accuracy-mode"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.contains("Runge"), "{table}");
    // a Runge row needs three meshes
    assert_eq!(table.lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit())).count(), 1);
}

#[test]
fn compare_reports_ratio() {
    let o = cli(&["compare", "--problem", "shock_density", "--nx", "100", "--repeats", "1", "--reference-nx", "400"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["ratio"].as_f64().unwrap() > 0.0);
    assert!(v["new_l1_rho"].as_f64().is_some());
}
