//! Every acceptance criterion at its stated tolerance, one PASS/FAIL line
//! each. Run with `cargo test -p catenary-cli --test acceptance -- --nocapture`.

use std::path::Path;
use std::process::Command;

use catenary_core::io::{read_csv, report_from_json, report_to_json, write_csv};
use catenary_core::suite::{self, Criterion};

fn catenary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_catenary")).args(args).output().expect("binary runs")
}

/// CLI side of criterion 11: `check --suite all` exits 0, and files written
/// by the binary read back and re-serialize to identical bytes.
fn cli_round_trip(dir: &Path) -> Result<String, String> {
    let check = catenary(&["check", "--suite", "all"]);
    if check.status.code() != Some(0) {
        return Err(format!(
            "check --suite all exited {:?}: {}",
            check.status.code(),
            String::from_utf8_lossy(&check.stdout)
        ));
    }
    let csv_path = dir.join("fig2.csv");
    let solve = catenary(&["solve", "--alpha", "1", "--r0", "0.25", "--span", "12.6", "-o", csv_path.to_str().unwrap()]);
    if !solve.status.success() {
        return Err(format!("solve failed: {}", String::from_utf8_lossy(&solve.stderr)));
    }
    let written = std::fs::read(&csv_path).map_err(|e| e.to_string())?;
    let rows = read_csv(&written[..]).map_err(|e| e.to_string())?;
    let mut again = Vec::new();
    write_csv(&mut again, &rows).map_err(|e| e.to_string())?;
    if again != written {
        return Err("CSV re-serialization differs".into());
    }
    let json_path = dir.join("report.json");
    let cls = catenary(&["classify", "--alpha", "1", "--r0", "2", "-o", json_path.to_str().unwrap()]);
    if !cls.status.success() {
        return Err(format!("classify failed: {}", String::from_utf8_lossy(&cls.stderr)));
    }
    let text = std::fs::read_to_string(&json_path).map_err(|e| e.to_string())?;
    let report = report_from_json(&text).map_err(|e| e.to_string())?;
    if report_to_json(&report).map_err(|e| e.to_string())? != text.trim_end() {
        return Err("JSON re-serialization differs".into());
    }
    Ok(format!("check exit 0; CLI CSV ({} rows) and JSON round trips bit-exact", rows.len()))
}

#[test]
fn acceptance() {
    let mut results = suite::run(&Criterion::ALL);
    let dir = tempfile::tempdir().unwrap();
    let cli = cli_round_trip(dir.path());
    let last = results.iter_mut().find(|r| r.number == 11).unwrap();
    match cli {
        Ok(d) => last.detail = format!("{}; {d}", last.detail),
        Err(e) => {
            last.passed = false;
            last.detail = format!("FAILED {e}; {}", last.detail);
        }
    }
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.number).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
