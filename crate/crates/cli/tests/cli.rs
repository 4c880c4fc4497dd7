use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn symtrop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtrop")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const RANK2: &str = "0 0 1 1\n0 0 1 1\n1 1 0 0\n1 1 0 0\n";

#[test]
fn symmetric_rank_of_c2_is_three() {
    let out = symtrop(&["rank", "--symmetric", "catalog:c2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("3"));
}

#[test]
fn ordinary_rank_of_c2_is_two() {
    let out = symtrop(&["rank", "catalog:c2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("2"));
}

#[test]
fn conic_union_of_lines() {
    let out = symtrop(&["conic", "1", "0", "1", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("singular: union of two tropical lines"));
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", "0 1\n2 x\n");
    let out = symtrop(&["det", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 3"), "{err}");
}

#[test]
fn unknown_catalog_entry_is_an_error() {
    let out = symtrop(&["rank", "catalog:nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_failure_exits_two() {
    let out = symtrop(&["lift", "catalog:c2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_path_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c2.txt", "symmetric\n1 0 0\n0 1 0\n0 0 1\n");
    let from_catalog = symtrop(&["rank", "--symmetric", "catalog:c2", "--format", "structured"]);
    let from_file = symtrop(&["rank", "--symmetric", &path, "--format", "structured"]);
    let a: serde_json::Value = serde_json::from_slice(&from_catalog.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn structured_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "a.txt", RANK2);
    let args = ["lift", path.as_str(), "--seed", "5", "--format", "structured"];
    let first = symtrop(&args);
    let second = symtrop(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(doc["schema"], "symtrop/1");
    assert!(doc.get("elapsed_ms").is_none());
}

#[test]
fn text_and_structured_agree() {
    let text = stdout(&symtrop(&["rank", "--symmetric", "catalog:c2"]));
    let doc: serde_json::Value =
        serde_json::from_slice(&symtrop(&["rank", "--symmetric", "catalog:c2", "--format", "structured"]).stdout)
            .unwrap();
    assert_eq!(text.lines().next().unwrap(), doc["summary"]);
    assert!(text.contains(&format!("input_digest: {}", doc["input_digest"].as_str().unwrap())));
    for (key, value) in doc["result"].as_object().unwrap() {
        let shown = match value {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert!(text.contains(&format!("{key}: {shown}")), "{key}");
    }
}

#[test]
fn lift_round_trip_and_invalid_lift() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "a.txt", RANK2);
    let lift_path = dir.path().join("lift.txt");
    let lift_file = lift_path.to_str().unwrap();
    let out = symtrop(&["lift", &matrix, "--seed", "7", "-o", lift_file]);
    assert_eq!(out.status.code(), Some(0));

    let out = symtrop(&["verify-lift", &matrix, lift_file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("valid lift"));

    let other = write(dir.path(), "b.txt", "0 0 2 1\n0 0 1 1\n2 1 0 0\n1 1 0 0\n");
    let out = symtrop(&["verify-lift", &other, lift_file]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().next(), Some("invalid lift"));
}

#[test]
fn witness_small_case() {
    let out = symtrop(&["witness", "-r", "5", "-n", "6", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn selftest_passes() {
    let out = symtrop(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
