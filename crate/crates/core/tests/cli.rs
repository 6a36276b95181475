mod support;

use std::process::{Command, Output};

use serde_json::Value;

fn jensen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jensen"))
        .args(args)
        .current_dir(support::golden_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn golden(name: &str) -> Value {
    let text = std::fs::read_to_string(support::golden_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn chain_matches_golden() {
    let out = jensen(&["chain", "--function", "neg_log", "--input", "sample.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        support::json_diff(&golden("chain.expected.json"), &v, 1e-12),
        None
    );
    assert!((v["gap"].as_f64().unwrap() - 0.128528).abs() < 1e-6);
    assert!((v["cbs_bound"].as_f64().unwrap() - 0.354648).abs() < 1e-6);
}

#[test]
fn entropy_matches_golden() {
    let out = jensen(&["entropy", "--input", "dist.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        support::json_diff(&golden("entropy.expected.json"), &v, 1e-12),
        None
    );
    assert!((v["shannon_entropy"].as_f64().unwrap() - 1.029653).abs() < 1e-6);
}

#[test]
fn output_is_byte_stable() {
    let args = ["renyi", "--alpha", "0.5", "--input", "dist.json"];
    assert_eq!(jensen(&args).stdout, jensen(&args).stdout);
}

#[test]
fn numbers_round_trip_exactly() {
    let out = jensen(&[
        "gap",
        "--function",
        "x_log_x",
        "--inline",
        r#"{"points":[[0.1],[0.7],[3.3]],"weights":[1,2,3]}"#,
    ]);
    let printed = json(&out)["gap"].as_f64().unwrap();
    let s = jensen_core::WeightedSample::scalar(&[0.1, 0.7, 3.3], &[1.0, 2.0, 3.0]).unwrap();
    let direct = jensen_core::engine::jensen_gap(&jensen_core::ConvexFunction::XLogX, &s).unwrap();
    assert_eq!(printed.to_bits(), direct.to_bits());
}

#[test]
fn errors_exit_two_and_name_the_field() {
    let out = jensen(&[
        "chain",
        "--function",
        "neg_log",
        "--inline",
        r#"{"points":[[1],[2]],"weights":[1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight"));

    let out = jensen(&["entropy", "--input", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    let out = jensen(&["means", "--inline", r#"{"values":[1,-2]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("values[1]"));

    let out = jensen(&["renyi", "--alpha", "1", "--input", "dist.json"]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(jensen(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(jensen(&["--help"]).status.code(), Some(0));
}

#[test]
fn table_is_aligned() {
    let out = jensen(&[
        "chain",
        "--function",
        "neg_log",
        "--input",
        "sample.json",
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let columns: Vec<usize> = text
        .lines()
        .map(|l| l.rfind("  ").map(|i| i + 2).unwrap())
        .collect();
    assert!(columns.windows(2).all(|w| w[0] == w[1]), "{text}");
    assert!(text
        .lines()
        .any(|l| l.starts_with("dg_bound") && l.ends_with("0.33")));
}

#[test]
fn replay_reads_a_record_file() {
    let mut config = jensen_core::harness::SuiteConfig {
        trials: 1,
        ..Default::default()
    };
    config.tolerances.inequality = jensen_core::Tolerance::new(0.0, -1.0);
    let report = jensen_core::harness::run_suite(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("record.json");
    std::fs::write(&path, serde_json::to_string(&report.failures[0]).unwrap()).unwrap();
    let out = jensen(&["replay", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reproduced"], true);

    // the same instance under default tolerances passes
    let mut record = report.failures[0].clone();
    record.tolerances = Default::default();
    std::fs::write(&path, serde_json::to_string(&record).unwrap()).unwrap();
    let out = jensen(&["replay", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["reproduced"], false);
}
