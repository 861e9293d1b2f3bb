//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use modaldoc::suite::{run_criterion, CriterionReport};

const SEED: u64 = 7;

/// Criteria with a wall-clock budget, in seconds.
fn budget(id: u8) -> Option<u64> {
    match id {
        1 => Some(10),
        2 => Some(30),
        10 => Some(20),
        _ => None,
    }
}

fn print_line(id: u8, title: &str, passed: bool, elapsed: Duration, note: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {id:>2}: {title} ({:.2}s){note}", elapsed.as_secs_f64());
}

fn library_criterion(id: u8) -> bool {
    let start = Instant::now();
    let report: CriterionReport = run_criterion(id, SEED);
    let elapsed = start.elapsed();
    let mut passed = report.passed;
    let mut note = String::new();
    if let Some(limit) = budget(id) {
        if elapsed > Duration::from_secs(limit) {
            passed = false;
            note = format!(" over the {limit}s budget");
        }
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        note.push_str(&format!("\n      {}: {}", c.name, c.detail));
    }
    print_line(id, &report.title, passed, elapsed, &note);
    passed
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_modaldoc")).args(args).output().expect("binary runs")
}

fn models(name: &str) -> String {
    format!("{}/models/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Byte-identical suite reports, and the 0/1/2 exit contract.
fn cli_determinism() -> bool {
    let start = Instant::now();
    let first = cli(&["suite", "--json", "--seed", "7"]);
    let second = cli(&["suite", "--json", "--seed", "7"]);
    let mut failures = Vec::new();
    if first.stdout != second.stdout || first.stdout.is_empty() {
        failures.push("suite reports differ between runs".to_string());
    }
    if first.status.code() != Some(0) {
        failures.push(format!("suite exited {:?}", first.status.code()));
    }
    match serde_json::from_slice::<serde_json::Value>(&first.stdout) {
        Ok(v) if v["seed"] == 7 && v["passed"] == true => {}
        _ => failures.push("suite report is not the expected JSON".to_string()),
    }
    let expect = [
        (vec!["check".to_string(), "--all".to_string(), models("kripke.modal")], 0),
        (vec!["check".to_string(), models("planted.modal")], 1),
        (vec!["check".to_string(), models("missing.modal")], 2),
        (vec!["suite".to_string(), "--no-such-flag".to_string()], 2),
    ];
    for (args, code) in expect {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = cli(&args).status.code();
        if got != Some(code) {
            failures.push(format!("`{}` exited {got:?}, expected {code}", args.join(" ")));
        }
    }
    let note: String = failures.iter().map(|f| format!("\n      {f}")).collect();
    print_line(12, "CLI determinism and exit codes", failures.is_empty(), start.elapsed(), &note);
    failures.is_empty()
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=11u8 {
        if !library_criterion(id) {
            failed.push(id);
        }
    }
    if !cli_determinism() {
        failed.push(12);
    }
    println!("{} of 12 criteria pass", 12 - failed.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
