//! End-to-end checks of the `commaseq` binary: output formats and the exit
//! code contract.

use std::process::{Command, Output};

fn commaseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commaseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = commaseq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_matches_paper_listings() {
    let out = stdout_of(&["gen", "--base", "10", "--start", "1", "--limit", "10"]);
    assert_eq!(out.lines().next().unwrap(), "1 12 35 94 135 186 248 331 344 387");

    let out = stdout_of(&["gen", "--base", "3", "--start", "1", "--radix-output", "--limit", "4"]);
    assert_eq!(out.lines().next().unwrap(), "1 12 110 111");

    let out = stdout_of(&["gen", "--base", "10", "--start", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "3 36");
    assert_eq!(lines[1], "terminated, length 2, last 36");
}

#[test]
fn gen_rejects_bad_usage() {
    assert_eq!(commaseq(&["gen", "--base", "2", "--start", "1"]).status.code(), Some(1));
    assert_eq!(commaseq(&["gen", "--base", "10", "--start", "0"]).status.code(), Some(1));
    assert_eq!(commaseq(&["gen", "--base", "10"]).status.code(), Some(1));
}

#[test]
fn verify_reports_finite_with_exit_zero() {
    let out = commaseq(&["verify", "--base", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["finite"], serde_json::Value::Bool(true));
    assert_eq!(json["L"], serde_json::json!(4));

    let out = commaseq(&["verify", "--base", "10", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["L"], serde_json::json!(924));
    assert_eq!(json["expected_d1"], serde_json::json!(49_896));
}

#[test]
fn verify_sharding_and_checkpoint_flow() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("b6.checkpoint");
    let cp_str = cp.to_str().unwrap();

    // One shard of the κ-space: partial progress, exit 0.
    let out = commaseq(&["verify", "--base", "6", "--checkpoint", cp_str, "--shard", "2:0..5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["covered"], serde_json::json!(5));
    assert_eq!(json["total"], serde_json::json!(40));
    assert!(cp.exists());

    // Finish the rest from the checkpoint.
    let out = commaseq(&["verify", "--base", "6", "--checkpoint", cp_str]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["finite"], serde_json::Value::Bool(true));
    assert_eq!(json["paths_walked"], serde_json::json!(40));

    // The checkpoint belongs to base 6.
    let out = commaseq(&["verify", "--base", "7", "--checkpoint", cp_str]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lb_prints_l_value() {
    let out = stdout_of(&["lb", "--base", "10"]);
    assert!(out.starts_with("L(10) = 924\n"), "{out}");

    let out = stdout_of(&["lb", "--base", "10", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["L"], serde_json::json!("924"));
}

#[test]
fn dvalues_csv_agrees() {
    let out = commaseq(&["dvalues", "--max-base", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "b,D_direct,D_gf,D_divisor,diff,agree");
    assert_eq!(lines[2], "3,1,1,1,1,1");
    assert_eq!(lines[5], "6,5,5,5,1,1");
    assert!(lines[1..].iter().all(|l| l.ends_with(",1")));

    // Method subset leaves the other columns empty.
    let out = stdout_of(&["dvalues", "--max-base", "4", "--method", "gf,divisor"]);
    assert_eq!(out.lines().nth(1).unwrap(), "2,,0,0,0,1");
}

#[test]
fn survival_csv_header_and_rows() {
    let out = stdout_of(&["survival", "--bases", "5..6", "--guard", "0"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "base,n_initial,n_flagged,mean_intervals,stddev,geometric_model,graph_model"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("5,24,0,"));
    assert!(lines[2].starts_with("6,35,0,"));
}

#[test]
fn paths_output_is_seed_reproducible() {
    let args = ["paths", "--base", "8", "--sample", "200", "--seed", "1"];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
    let other_seed = stdout_of(&["paths", "--base", "8", "--sample", "200", "--seed", "2"]);
    assert_ne!(first, other_seed);
    let json: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(json["walked"], serde_json::json!(200));
    assert_eq!(json["L"], serde_json::json!(840));
}

#[test]
fn period_prints_pre_period_and_period() {
    assert_eq!(stdout_of(&["period", "--base", "10", "--mod", "230"]), "k0=1 l=22\n");
    assert_eq!(stdout_of(&["period", "--base", "2", "--mod", "8"]), "k0=3 l=1\n");
}

#[test]
fn mines_lists_landmines() {
    let out = stdout_of(&["mines", "--base", "10", "--max", "100000"]);
    let values: Vec<&str> = out.lines().collect();
    assert!(values.contains(&"45"));
    assert!(values.contains(&"99972"));
    assert!(!values.contains(&"44"));

    let out = stdout_of(&["mines", "--base", "3", "--max", "30", "--radix-output"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), vec!["11", "211"]);
}
