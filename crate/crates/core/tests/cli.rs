use std::process::{Command, Output};

use lehmer_nib::fixtures::Fixtures;
use lehmer_nib::report::{EnumLine, ReportRecord, RowResult, RowStatus};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lehmer-nib")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn analyze_json_round_trips_and_recertifies() {
    let out = run(&["analyze", "44", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: Value = serde_json::from_str(text.trim()).unwrap();
    assert!(no_floats(&value), "numbers must be strings: {text}");
    let rec: ReportRecord = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(rec.u.as_deref(), Some("3363345"));
    assert_eq!(rec.conductor, "2501");
    assert!(rec.certified);
    assert!(rec.orbit_witness.is_some());
    assert!(rec.recertify().unwrap());
}

#[test]
fn analyze_negative_n() {
    let out = run(&["analyze", "-1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rec: ReportRecord = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rec.conductor, "11");
    assert_eq!(rec.nib_generator.unwrap(), ["0", "1", "0", "0", "0"].map(String::from));
}

#[test]
fn wild_json_exit_code() {
    let out = run(&["analyze", "-15", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: ReportRecord = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rec.status, "wild");
    assert!(rec.nib_generator.is_none());
}

#[test]
fn enumerate_json_lines() {
    let out = run(&["enumerate", "14", "--k", "-1..1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<EnumLine> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 30);
    assert!(lines.iter().all(|l| l.certified && l.n == "14"));
    for l in stdout(&out).lines() {
        assert!(no_floats(&serde_json::from_str(l).unwrap()));
    }
}

#[test]
fn empty_range_prints_nothing() {
    let out = run(&["enumerate", "14", "--k", "3..1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["analyze", "x"]).status.code(), Some(1));
    assert_eq!(run(&["enumerate", "14", "--k", "1.2"]).status.code(), Some(1));
    assert_eq!(run(&["verify-table", "--only", "bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_table_reports_erratum_without_failing() {
    let out = run(&["verify-table", "--only", "table2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<RowResult> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 11);
    let errata: Vec<_> = rows.iter().filter(|r| r.status == RowStatus::Erratum).collect();
    assert_eq!(errata.len(), 1);
    assert_eq!(errata[0].label, "Table2 k=-4");
    assert!(errata[0].detail.contains("-781"));
}

#[test]
fn tampered_fixture_fails_with_disc() {
    let mut f = Fixtures::embedded();
    let row = f.generators.iter_mut().find(|g| g.n == "14").unwrap();
    // shifts the generator by 1: still integral, no longer a normal basis generator
    row.constant = (row.constant.parse::<i64>().unwrap() + 71).to_string();
    let path = std::env::temp_dir().join(format!("lehmer-nib-tampered-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    let out = run(&["verify-table", "--only", "n=14", "--fixtures", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.contains("FAIL") && text.contains("disc"), "{text}");
}

#[test]
fn unfactored_discriminant_exits_three() {
    let out = run(&["analyze", "123456789012345678901234567891"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--factor-hint"));
}
