//! End-to-end smoke tests of the `fae` binary: exit codes, output formats,
//! and artifact files.

use std::path::Path;
use std::process::{Command, Output};

fn fae(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fae")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn help_and_version_exit_zero() {
    let out = fae(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["estimate", "bench", "verify", "bounds"] {
        assert!(stdout(&out).contains(sub), "help must list {sub}");
    }
    assert_eq!(fae(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_and_domain_errors_exit_one() {
    // Missing subcommand, missing required argument, bad value, bad domain.
    assert_eq!(fae(&[]).status.code(), Some(1));
    assert_eq!(fae(&["estimate", "--amplitude", "0.3"]).status.code(), Some(1));
    assert_eq!(fae(&["verify", "--suite", "nonsense"]).status.code(), Some(1));
    let out = fae(&["estimate", "--amplitude", "1.5", "--ell", "4", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn estimate_prints_summary_or_json() {
    let out = fae(&["estimate", "--amplitude", "0.3", "--ell", "6", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("amplitude_hat"));
    assert!(text.contains("oracle calls"));

    let out = fae(&[
        "estimate", "--amplitude", "0.3", "--ell", "6", "--seed", "42", "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["input"]["ell"], 6);
    assert_eq!(doc["result"]["trace"].as_array().unwrap().len(), 6);
    assert!(doc["result"]["amplitude_hat"].as_f64().unwrap() > 0.0);
}

#[test]
fn bench_writes_all_requested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("sweep.json");
    let svg = dir.path().join("sweep.svg");
    let out = fae(&[
        "bench",
        "--amplitudes",
        "0.3",
        "--ell-min",
        "3",
        "--ell-max",
        "5",
        "--trials",
        "10",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(
        "amplitude,ell,j0_mode,trials,delta_c,err_q95,n_orac_exact_median,\
         n_orac_exact_min,n_orac_exact_max,n_orac_paper_median,coverage_rate,seed\n"
    ));
    assert_eq!(text.lines().count(), 1 + 3);

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["cells"].as_array().unwrap().len(), 3);
    assert_eq!(doc["trials"].as_array().unwrap().len(), 30);

    let markup = std::fs::read_to_string(&svg).unwrap();
    assert!(markup.starts_with("<svg "));
}

#[test]
fn unwritable_output_exits_two() {
    assert!(!Path::new("/nonexistent-dir").exists());
    let out = fae(&[
        "bench",
        "--amplitudes",
        "0.3",
        "--ell-min",
        "3",
        "--ell-max",
        "3",
        "--trials",
        "2",
        "--seed",
        "5",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_prints_check_lines() {
    let out = fae(&["verify", "--suite", "simulator"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[PASS]"));
    assert!(text.contains("suite simulator: PASS"));
}

#[test]
fn bounds_prints_the_report() {
    let out = fae(&["bounds", "--epsilon", "1e-3", "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ell"));
    assert!(text.contains("competitor bound"));
    assert!(text.contains("bound ratio"));

    let out = fae(&["bounds", "--epsilon", "2.0", "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("n/a"));
}
