//! End-to-end tests of the command-line interface: golden output, exit
//! codes and spec-file round trips. Set `UPDATE_GOLDEN=1` to rewrite the
//! files under `tests/golden/`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use solitonlab::cli::{self, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use tempfile::tempdir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("solitonlab").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

/// Status and check name of every claim-table row, without residuals.
fn verdict_lines(table: &str) -> String {
    table
        .lines()
        .map(|line| {
            let mut cols = line.split_whitespace();
            let status = cols.next().unwrap_or("");
            let rest: Vec<&str> = line.split_once(status).map_or("", |(_, rest)| rest).split("  ").filter(|s| !s.trim().is_empty()).collect();
            format!("{status} {}", rest.first().map(|s| s.trim()).unwrap_or(""))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn statuses(json: &str) -> Vec<(String, Option<String>, String)> {
    let doc: Value = serde_json::from_str(json).unwrap();
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["subject"].as_str().map(String::from), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn zoo_listing_is_golden() {
    let r = run(&["zoo"]);
    assert_eq!(r.code, EXIT_PASS);
    assert_golden("zoo.txt", &r.stdout);
}

#[test]
fn flat_curvature_csv_is_golden() {
    let r = run(&["curvature", "--zoo", "flat-cosymplectic-3", "--samples", "2", "--grid", "x=0:1:2,y=0:0:1,z=-1:1:2", "--format", "csv"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.stderr);
    assert_golden("flat-cosymplectic-3.curvature.csv", &r.stdout);
}

#[test]
fn worked_example_claim_table_is_golden() {
    let r = run(&["verify-paper"]);
    assert_eq!(r.code, EXIT_PASS, "{}", r.stderr);
    assert_golden("paper-kenmotsu.claims.txt", &verdict_lines(&r.stderr));
    let doc: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["manifold"], "paper-kenmotsu");
    assert!(doc["points"].as_u64().unwrap() >= 100);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_solitonlab");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["validate", "--zoo", "sasakian-r3", "--samples", "3"]), Some(EXIT_PASS));
    assert_eq!(status(&["validate", "--zoo", "no-such-entry"]), Some(EXIT_INPUT));
    assert_eq!(status(&["frobnicate"]), Some(EXIT_INPUT));
    assert_eq!(status(&["--help"]), Some(EXIT_PASS));
    // an expected failure does not fail the run
    assert_eq!(status(&["check-soliton", "--zoo", "paper-kenmotsu", "--candidate", "xi-riemann", "--samples", "3"]), Some(EXIT_PASS));
    assert_eq!(status(&["check-soliton", "--zoo", "paper-kenmotsu", "--candidate", "riemann", "--tol", "1e-17", "--samples", "3"]), Some(EXIT_FAIL));
}

#[test]
fn exit_codes_are_stable_across_runs() {
    for _ in 0..2 {
        assert_eq!(run(&["check-soliton", "--zoo", "paper-kenmotsu", "--candidate", "ricci", "--samples", "3"]).code, EXIT_PASS);
        assert_eq!(run(&["check-soliton", "--zoo", "paper-kenmotsu", "--candidate", "nope"]).code, EXIT_INPUT);
    }
}

#[test]
fn export_round_trip_keeps_every_verdict() {
    let dir = tempdir().unwrap();
    for name in solitonlab::zoo::ENTRIES {
        let path = dir.path().join(format!("{name}.json"));
        let p = path.to_str().unwrap();
        assert_eq!(run(&["export", "--zoo", name, "-o", p]).code, EXIT_PASS);
        let direct = run(&["check-soliton", "--zoo", name, "--all", "--samples", "4"]);
        let reloaded = run(&["check-soliton", "--spec", p, "--all", "--samples", "4"]);
        assert_eq!(direct.code, reloaded.code, "{name}");
        assert_eq!(statuses(&direct.stdout), statuses(&reloaded.stdout), "{name}");
        let (a, b) = (run(&["curvature", "--zoo", name, "--samples", "4"]), run(&["curvature", "--spec", p, "--samples", "4"]));
        assert_eq!(statuses(&a.stdout), statuses(&b.stdout), "{name}");
    }
}

#[test]
fn asymmetric_metric_fails_validation() {
    let dir = tempdir().unwrap();
    let mut spec: Value = serde_json::from_str(&solitonlab::zoo::spec("flat-cosymplectic-3").unwrap().to_json()).unwrap();
    spec["metric"][0][1] = Value::String("0.1".into());
    spec["metric"][1][0] = Value::String("0.2".into());
    let path = dir.path().join("asym.json");
    fs::write(&path, spec.to_string()).unwrap();
    let r = run(&["validate", "--spec", path.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(r.code, EXIT_FAIL, "{}", r.stderr);
    let failing: Vec<_> = statuses(&r.stdout).into_iter().filter(|(_, _, s)| s == "fail").map(|(n, _, _)| n).collect();
    assert!(failing.contains(&"metric.symmetric".to_string()), "{failing:?}");
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"name\": \"x\",\n  \"dimension\": 3,\n  \"coordinates\": [\"x\" \"y\"]\n}\n").unwrap();
    let r = run(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("bad.json:4:"), "{}", r.stderr);
}

#[test]
fn unparsable_expression_is_an_input_error() {
    let dir = tempdir().unwrap();
    let mut spec: Value = serde_json::from_str(&solitonlab::zoo::spec("paper-kenmotsu").unwrap().to_json()).unwrap();
    spec["metric"][2][2] = Value::String("1 + * z".into());
    let path = dir.path().join("expr.json");
    fs::write(&path, spec.to_string()).unwrap();
    let r = run(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("metric[2][2]"), "{}", r.stderr);
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(run(&["validate", "--spec", "/nonexistent/spec.json"]).code, EXIT_INPUT);
    assert_eq!(run(&["validate", "--zoo", "paper-kenmotsu", "--tol", "-1"]).code, EXIT_INPUT);
    assert_eq!(run(&["validate", "--zoo", "paper-kenmotsu", "--grid", "z=2:1"]).code, EXIT_INPUT);
    assert_eq!(run(&["validate"]).code, EXIT_INPUT);
    assert_eq!(run(&["check-soliton", "--zoo", "paper-kenmotsu"]).code, EXIT_INPUT);
}

#[test]
fn tiny_tolerance_produces_failures() {
    let r = run(&["verify-paper", "--tol", "1e-15"]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(statuses(&r.stdout).iter().any(|(_, _, s)| s == "fail"));
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["check-soliton", "--zoo", "alpha-kenmotsu-2", "--all", "--seed", "7", "--samples", "200"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.code, b.code);
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["seed"], 7);
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.json");
    let r = run(&["validate", "--zoo", "kenmotsu-5", "--samples", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "validate");
    assert_eq!(doc["dimension"], 5);
}
