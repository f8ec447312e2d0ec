//! Acceptance criteria 1-8, one PASS/FAIL line each. Runs without the test
//! harness so the lines are always shown and the timings are not distorted by
//! concurrently running tests.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use courant_vpa::format::parse_path;
use courant_vpa::selftest::{self, CriterionResult};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("fixtures directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cvpa"))
        .collect();
    v.sort();
    v
}

fn cli_contract() -> CriterionResult {
    let bin = env!("CARGO_BIN_EXE_courant-vpa");
    let start = Instant::now();
    let mut failures = Vec::new();

    let out = Command::new(bin).arg("selftest").output().expect("run selftest");
    if out.status.code() != Some(0) {
        failures.push(format!("selftest exited {:?}:\n{}", out.status.code(), String::from_utf8_lossy(&out.stdout)));
    }

    let broken = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/broken.cvpa");
    let out = Command::new(bin).args(["check", "courant"]).arg(&broken).output().expect("run check");
    let text = String::from_utf8_lossy(&out.stdout);
    if out.status.code() != Some(1) || !text.contains("c5 at (beta, beta)") {
        failures.push(format!("broken fixture: exit {:?}, report:\n{text}", out.status.code()));
    }

    for path in fixtures() {
        let once = match parse_path(&path) {
            Ok(f) => f.print(),
            Err(e) => {
                failures.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        let again = courant_vpa::format::parse_str(&once).map(|f| f.print());
        if again.as_deref().ok() != Some(once.as_str()) {
            failures.push(format!("{}: print/parse is not a fixpoint", path.display()));
        }
    }

    CriterionResult {
        id: 8,
        name: "cli contract",
        passed: failures.is_empty(),
        elapsed_ms: start.elapsed().as_millis(),
        budget_ms: Duration::from_secs(120).as_millis(),
        failures,
    }
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    for c in selftest::CRITERIA {
        let r = c();
        println!("{r}");
        results.push(r);
    }
    let r = cli_contract();
    println!("{r}");
    results.push(r);
    let failed: Vec<u8> = results.iter().filter(|r| !r.ok()).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} fail");
        ExitCode::FAILURE
    }
}
