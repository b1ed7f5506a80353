use std::process::{Command, Output};

use catenary_core::io::read_csv;
use serde_json::Value;

fn catenary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catenary")).args(args).output().expect("binary runs")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("machine-readable error")
}

#[test]
fn classify_outer_asymptotic() {
    let out = catenary(&["classify", "--alpha", "1", "--r0", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "OuterAsymptotic");
    assert!(v["blowup_angle"].as_f64().unwrap() < std::f64::consts::FRAC_PI_2);
    assert!(v.get("period").is_none());
}

#[test]
fn classify_several_radii_gives_an_array() {
    let out = catenary(&["classify", "--alpha", "-0.5", "--r0", "0.75", "--r0", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let regimes: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["regime"].as_str().unwrap()).collect();
    assert_eq!(regimes, ["OrthogonalHitConvex", "OrthogonalHitConcave"]);
}

#[test]
fn solve_constant_circle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = catenary(&["solve", "--alpha", "1", "--r0", "0.5", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert!(rows.len() > 2 && rows.iter().all(|r| r.r == 0.5 && r.dr == 0.0));
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1, "no temporary files left behind: {names:?}");
}

#[test]
fn solve_inversion_pair_with_plots() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("pair.csv");
    let svg = dir.path().join("pair.svg");
    let phase = dir.path().join("pair_phase.svg");
    let out = catenary(&[
        "solve",
        "--alpha=-2",
        "--r0",
        "2,0.5",
        "-o",
        base.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--phase-svg",
        phase.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a = read_csv(std::fs::File::open(dir.path().join("pair_r0=2.csv")).unwrap()).unwrap();
    let b = read_csv(std::fs::File::open(dir.path().join("pair_r0=0.5.csv")).unwrap()).unwrap();
    assert_eq!(a[a.len() / 2].s, 0.0);
    assert!((a[a.len() / 2].r * b[b.len() / 2].r - 1.0).abs() == 0.0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && !text.contains("href"));
    assert!(std::fs::read_to_string(&phase).unwrap().contains("<polyline"));
}

#[test]
fn usage_errors_exit_one_with_json() {
    for args in [&["solve", "--alpha", "0", "--r0", "2"][..], &["bogus"], &["classify", "--r0", "2"], &["solve", "--alpha", "1", "--r0", "1"]] {
        let out = catenary(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let v = stderr_json(&out);
        assert_eq!(v["error"], "usage");
        assert_eq!(v["exit_code"], 1);
    }
}

#[test]
fn io_errors_exit_three() {
    let out = catenary(&["solve", "--alpha", "1", "--r0", "0.25", "-o", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "io");
    let out = catenary(&["classify", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unresolved_exits_two() {
    let out = catenary(&["classify", "--alpha", "1", "--r0", "0.25", "--max-samples", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "Unresolved");
    assert!(v["solver"]["notes"][0].as_str().unwrap().contains("sample budget"));
    assert_eq!(stderr_json(&out)["error"], "numerical");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"alpha": [1.0], "r0": [0.25], "span": 3.0}"#).unwrap();
    let out = catenary(&["classify", "--config", cfg.to_str().unwrap(), "--r0", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["r0"], 2.0);
    assert_eq!(v["solver"]["span"], 3.0);
    std::fs::write(&cfg, r#"{"alpha": [1.0], "r0": [0.25], "spam": 3.0}"#).unwrap();
    let out = catenary(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_json_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = catenary(&["sweep", "--alpha", "1,-2", "--r0-grid", "0.5:2:4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // r0 = 1 is dropped from the grid
    assert_eq!(v.as_array().unwrap().len(), 6);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("ConstantCircle") && table.contains("OrthogonalHitConcave"));
}

#[test]
fn phase_portrait_is_an_svg() {
    let out = catenary(&["phase", "--alpha=-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<circle"));
}

#[test]
fn check_subset_and_unknown_suite() {
    let out = catenary(&["check", "--suite", "equilibrium,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS]  3") && text.contains("[PASS]  8") && text.contains("2 of 2"));
    assert_eq!(catenary(&["check", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn log_level_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_catenary"))
        .args(["classify", "--alpha", "1", "--r0", "2"])
        .env("CATENARY_LOG", "info")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("[alpha=1 r0=2] OuterAsymptotic"));
}
