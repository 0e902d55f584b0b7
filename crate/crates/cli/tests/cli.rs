use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use rectify_kit::mask_timing;
use serde_json::Value;

const GOLDEN: &[(&str, i32)] = &[("point", 0), ("non_associative", 2), ("walking_arrow_bound2", 3), ("full", 2)];

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn manifest(name: &str) -> String {
    dir().join("manifests").join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectify-kit")).args(args).output().expect("binary runs")
}

/// Runs `args` writing the report to a temporary file; returns exit code and report text.
fn run_with_report(args: &[&str]) -> (i32, String) {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("report.json");
    let path = path.to_str().unwrap();
    let mut all = args.to_vec();
    all.extend(["--report", path]);
    let out = kit(&all);
    let text = std::fs::read_to_string(path).unwrap_or_default();
    (out.status.code().unwrap(), text)
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn golden_reports() {
    for &(name, code) in GOLDEN {
        let (got, text) = run_with_report(&["run", &manifest(name)]);
        assert_eq!(got, code, "{name}");
        let masked = mask_timing(&text).unwrap();
        let golden = dir().join("golden").join(format!("{name}.json"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&golden, &masked).unwrap();
        }
        assert_eq!(masked, std::fs::read_to_string(&golden).unwrap(), "{name} differs from its golden report");
    }
}

#[test]
fn exit_code_examples() {
    let (_, text) = run_with_report(&["run", &manifest("point")]);
    assert_eq!(json(&text)["tasks"][0]["result"]["violations"], serde_json::json!([]));

    let (_, text) = run_with_report(&["run", &manifest("non_associative")]);
    let violations = &json(&text)["tasks"][0]["result"]["violations"];
    assert!(violations.as_array().unwrap().iter().any(|v| v["tuple"] == serde_json::json!(["a", "a", "a"])));

    let (_, text) = run_with_report(&["run", &manifest("walking_arrow_bound2")]);
    assert_eq!(json(&text)["tasks"][0]["result"]["stabilized"], Value::Bool(false));
    let (code, _) = run_with_report(&["run", &manifest("walking_arrow_bound2"), "--strict"]);
    assert_eq!(code, 2);
    let (code, text) = run_with_report(&["run", &manifest("walking_arrow_bound2"), "--word-bound", "3"]);
    // Per-task bounds take precedence over flags.
    assert_eq!((code, json(&text)["tasks"][0]["parameters"]["word_bound"].as_u64()), (3, Some(2)));
}

#[test]
fn subcommands_select_entities() {
    let (code, text) = run_with_report(&["localize", &manifest("full"), "--entity", "arrow", "--word-bound", "3"]);
    assert_eq!(code, 0);
    let tasks = json(&text)["tasks"].as_array().unwrap().clone();
    assert_eq!(tasks.len(), 1);
    assert_eq!(tasks[0]["name"], "localize:arrow");

    let (code, text) = run_with_report(&["validate", &manifest("full")]);
    assert_eq!(code, 0);
    assert_eq!(json(&text)["summary"]["pass"].as_u64(), Some(14));

    let (code, text) = run_with_report(&["fibration", &manifest("full")]);
    assert_eq!(code, 2);
    let report = json(&text);
    let names: Vec<&str> = report["tasks"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["fibration:id_a2", "fibration:id_random", "fibration:unit_inclusion"]);

    let out = kit(&["localize", &manifest("full"), "--entity", "k"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k:"));
}

#[test]
fn field_override() {
    let (code, text) = run_with_report(&["run", &manifest("point"), "--field", "F5"]);
    assert_eq!(code, 0);
    assert_eq!(json(&text)["field"], "F5");
    let out = kit(&["run", &manifest("point"), "--field", "F4"]);
    assert_eq!(out.status.code(), Some(1));
}

fn write_manifest(text: &str) -> (tempfile::TempDir, String) {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("m.json");
    std::fs::write(&path, text).unwrap();
    let path = path.to_string_lossy().into_owned();
    (tmp, path)
}

#[test]
fn parse_errors_cite_position_and_token() {
    let (_tmp, path) = write_manifest("{\n  \"format\": \"rectify-kit/1\",\n  \"field\": Q,\n  \"entities\": []\n}\n");
    let out = kit(&["run", &path]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:"), "{err}");
    assert!(err.contains("`Q`"), "{err}");

    let (_tmp, path) = write_manifest("{\n  \"format\": \"rectify-kit/1\",\n  \"feild\": \"Q\"\n}\n");
    let err = String::from_utf8_lossy(&kit(&["run", &path]).stderr).into_owned();
    assert!(err.contains(":3:") && err.contains("feild"), "{err}");
}

#[test]
fn semantic_errors_cite_entity() {
    let cases = [
        (r#"{"format": "rectify-kit/1", "field": "Q", "entities": [], "tasks": []}"#, None),
        (r#"{"format": "rectify-kit/2", "field": "Q"}"#, Some("format")),
        (r#"{"format": "rectify-kit/1"}"#, Some("field")),
        (
            r#"{"format": "rectify-kit/1", "field": "Q", "entities": [{"kind": "category", "name": "c", "objects": ["X"], "morphisms": [["f", "X", "Y", 0]]}]}"#,
            Some("c:"),
        ),
        (
            r#"{"format": "rectify-kit/1", "field": "Q", "entities": [{"kind": "category", "name": "c", "catalog": "k"}, {"kind": "category", "name": "c", "catalog": "k"}]}"#,
            Some("duplicate"),
        ),
        (
            r#"{"format": "rectify-kit/1", "field": "Q", "entities": [{"kind": "category", "name": "c", "catalog": "k"}], "tasks": [{"name": "t", "op": "localize", "entity": "c"}]}"#,
            Some("t:"),
        ),
        (
            r#"{"format": "rectify-kit/1", "field": "Q", "entities": [], "tasks": [{"name": "t", "op": "check_ainf_relations", "entity": "nope"}]}"#,
            Some("t:"),
        ),
        (
            r#"{"format": "rectify-kit/1", "field": "F5", "entities": [{"kind": "category", "name": "c", "objects": ["X"], "morphisms": [["a", "X", "X", 0]], "operations": [[["a", "a"], [["a", "1/5"]]]]}]}"#,
            Some("c:"),
        ),
    ];
    for (text, expected) in cases {
        let (_tmp, path) = write_manifest(text);
        let out = kit(&["run", &path]);
        let err = String::from_utf8_lossy(&out.stderr);
        match expected {
            None => assert_eq!(out.status.code(), Some(0), "{text}: {err}"),
            Some(needle) => {
                assert_eq!(out.status.code(), Some(1), "{text}");
                assert!(err.contains(needle), "{text}: {err}");
            }
        }
    }
}

/// A task whose operation rejects its input is an input error.
#[test]
fn task_errors_exit_one() {
    let text = r#"{"format": "rectify-kit/1", "field": "Q",
        "entities": [{"kind": "category", "name": "m3", "catalog": "m3"}],
        "tasks": [{"op": "counit-check", "entity": "m3"}, {"op": "validate", "entity": "m3"}]}"#;
    let (_tmp, path) = write_manifest(text);
    let (code, report) = run_with_report(&["run", &path]);
    assert_eq!(code, 1);
    let report = json(&report);
    assert_eq!(report["summary"]["error"].as_u64(), Some(1));
    assert!(report["tasks"][0]["result"]["message"].as_str().unwrap().contains("DG"));
}

#[test]
fn determinism_across_runs_and_jobs() {
    let start = Instant::now();
    for &(name, _) in GOLDEN {
        let m = manifest(name);
        let reports: Vec<String> = [["--jobs", "1"], ["--jobs", "1"], ["--jobs", "4"], ["--jobs", "4"]]
            .iter()
            .map(|jobs| {
                let (_, text) = run_with_report(&["run", &m, jobs[0], jobs[1]]);
                mask_timing(&text).unwrap()
            })
            .collect();
        assert!(reports.windows(2).all(|w| w[0] == w[1]), "{name} is not reproducible");
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
}
