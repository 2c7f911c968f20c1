//! End-to-end tests of the `nearmiss` binary: output schemas, exit codes,
//! and byte-level determinism.

use std::process::{Command, Output};

fn nearmiss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearmiss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

/// Parse a named column out of a CSV body with a header row.
fn csv_field(body: &str, row: usize, column: &str) -> String {
    let mut lines = body.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == column)
        .unwrap_or_else(|| panic!("column {column} in {header:?}"));
    lines
        .nth(row)
        .expect("row")
        .split(',')
        .nth(idx)
        .expect("field")
        .to_string()
}

#[test]
fn eval_preset_csv() {
    let out = nearmiss(&["eval", "fig2-b", "--format", "csv"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.starts_with("id,Cw,C_s2,dir_bits,move_bits,U2,U1s,U2s,p_subj,p_ex_ante,clamped\n"));
    let u2: f64 = csv_field(&body, 0, "U2").parse().unwrap();
    assert!((u2 - 4.585).abs() < 0.001, "U2 = {u2}");
    assert_eq!(csv_field(&body, 0, "clamped"), "false");
    // six decimal places on every numeric column
    assert_eq!(csv_field(&body, 0, "Cw"), "5.584963");
}

#[test]
fn eval_fig4d_is_unclamped() {
    let out = nearmiss(&["eval", "fig4-d", "--format", "csv"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let u2: f64 = csv_field(&body, 0, "U2").parse().unwrap();
    assert!((u2 - 7.322).abs() < 0.001, "U2 = {u2}");
    assert_eq!(csv_field(&body, 0, "clamped"), "false");
}

#[test]
fn eval_missing_file_fails_with_a_diagnostic() {
    let out = nearmiss(&["eval", "missing.scn"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.scn"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn eval_reads_scenario_files() {
    let dir = std::env::temp_dir().join("nearmiss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tiny.scn");
    std::fs::write(&path, "dim 1\nsize 8\ncell 1\nwin 4 6\noutcome 3\n").unwrap();
    let out = nearmiss(&["eval", path.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    // the file stem names the unnamed scenario
    assert_eq!(csv_field(&stdout(&out), 0, "id"), "tiny");
}

#[test]
fn eval_rejects_invalid_scenarios() {
    let dir = std::env::temp_dir().join("nearmiss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("overlap.scn");
    std::fs::write(
        &path,
        "dim 1\nsize 48\ncell 1\nwin 10 20\nwin 15 25\noutcome 3\n",
    )
    .unwrap();
    let out = nearmiss(&["eval", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("lines 4 and 5"), "stderr: {err}");
}

#[test]
fn eval_debug_goes_to_stderr() {
    let out = nearmiss(&["eval", "fig2-b", "--debug", "--format", "csv"]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains('#'));
    let err = stderr(&out);
    assert!(err.contains("counterfactual"));
    assert!(err.contains("code"));
}

#[test]
fn rank_orders_presets() {
    let out = nearmiss(&["rank", "fig2-b", "fig2-c", "fig2-d"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let ids: Vec<&str> = body
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(ids, ["fig2-d", "fig2-b", "fig2-c"]);

    let out = nearmiss(&["rank", "fig4-a", "fig4-c", "--format", "csv"]);
    let body = stdout(&out);
    assert!(body.starts_with("rank,id,"));
    assert_eq!(csv_field(&body, 0, "id"), "fig4-a");
    assert_eq!(csv_field(&body, 0, "rank"), "1");
}

#[test]
fn rank_single_input() {
    let out = nearmiss(&["rank", "fig2-b"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let row = body.lines().nth(1).unwrap();
    assert!(row.starts_with("1"));
    assert!(row.contains("fig2-b"));
}

#[test]
fn rank_aborts_on_any_invalid_input() {
    let out = nearmiss(&["rank", "fig2-b", "missing.scn"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
}

#[test]
fn rank_score_flag_changes_the_quantity() {
    let out = nearmiss(&["rank", "fig2-b", "fig2-c", "--score", "u2s"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().next().unwrap().contains("U2s"));
}

#[test]
fn reproduce_passes_and_is_stable_without_structure_cost() {
    let out = nearmiss(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 5, "header plus four rows");
    for id in ["fig2-b", "fig2-d", "fig4-a", "fig4-d"] {
        assert!(body.contains(id));
    }
    assert!(!body.contains("FAIL"));

    // the reference presets are unsplit, so the penalty flag changes nothing
    let plain = nearmiss(&["reproduce", "--format", "csv"]);
    let none = nearmiss(&["reproduce", "--format", "csv", "--structure-cost", "none"]);
    assert_eq!(stdout(&plain), stdout(&none));
    assert!(stdout(&plain).starts_with("preset,reference,computed,delta,status\n"));
}

#[test]
fn presets_lists_all_seven() {
    let out = nearmiss(&["presets", "--format", "csv"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 8);
    for id in ["fig2-a", "fig2-b", "fig2-c", "fig2-d", "fig4-a", "fig4-c", "fig4-d"] {
        assert!(body.contains(id));
    }
}

#[test]
fn oracle_is_deterministic_per_seed() {
    let args = ["oracle", "fig2-b", "--samples", "200000", "--seed", "42"];
    let first = nearmiss(&args);
    let second = nearmiss(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("pass"));
}

#[test]
fn oracle_reports_expected_discrepancies_without_failing() {
    let out = nearmiss(&["oracle", "fig2-c", "--samples", "50000"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.contains("expected"));
    assert!(!body.contains("FAIL"));
}

#[test]
fn structure_cost_none_removes_the_split_gap() {
    let split = nearmiss(&["eval", "fig2-c", "--format", "csv", "--structure-cost", "none"]);
    let plain = nearmiss(&["eval", "fig2-b", "--format", "csv", "--structure-cost", "none"]);
    let u2_split: f64 = csv_field(&stdout(&split), 0, "U2").parse().unwrap();
    let u2_plain: f64 = csv_field(&stdout(&plain), 0, "U2").parse().unwrap();
    assert!((u2_split - u2_plain).abs() < 1e-9);
}
