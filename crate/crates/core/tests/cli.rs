mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::{fixture_path, golden_path};

fn typik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typik"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn import_monk(dir: &Path, n: u32) -> String {
    let kb = dir.join(format!("monk{n}.json"));
    let net = fixture_path("monk_synthetic.json");
    let out = typik(&["import-nn", path(&net), "--n", &n.to_string(), "--out", path(&kb)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path(&kb).to_string()
}

#[test]
fn validate_reports_counts() {
    let out = typik(&["--json", "validate", path(&fixture_path("penguin.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["concepts"], 7);
    assert_eq!(v["typicality_inclusions"], 6);
}

#[test]
fn malformed_documents_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "n": 0, "algebra": "goedel", "concepts": ["A", "A"] }"#).unwrap();
    let out = typik(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert!(err["error"].is_string());
    assert!(!err["message"].as_str().unwrap().is_empty());

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(typik(&["validate", path(&bad)]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = typik(&["validate", path(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn invalid_kb_lists_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{ "n": 2, "algebra": "goedel", "concepts": ["A"],
             "tbox": [ { "lhs": "A", "rhs": "Z", "rel": "<=", "alpha": 1.5 } ] }"#,
    )
    .unwrap();
    let out = typik(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert!(err["diagnostics"].as_array().unwrap().len() >= 2, "{err}");
}

#[test]
fn entail_exit_status_follows_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let kb = import_monk(dir.path(), 3);

    let out = typik(&["--json", "entail", &kb, "T(o) -> (i1 & i4) | i5 >= 1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["entailed"], true);
    assert_eq!(v["mode"], "Proper");
    assert_eq!(v["typical_degree"], "3/3");

    let out = typik(&["--json", "entail", &kb, "T(o) -> i1 & i4 >= 1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["entailed"], false);
    assert_eq!(v["witness"]["i5"], "3/3");
    assert_eq!(v["witness"]["o"], "3/3");

    for strategy in ["search", "feedforward", "exhaustive"] {
        let out = typik(&["entail", &kb, "T(o) -> i1 & i4 >= 1", "--strategy", strategy]);
        assert_eq!(out.status.code(), Some(1), "{strategy}");
    }
}

#[test]
fn entail_reports_vacuous_unsatisfiable() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("contradiction.json");
    std::fs::write(
        &kb,
        r#"{ "n": 2, "algebra": "goedel", "concepts": ["A", "B"], "individuals": ["a"],
             "abox": [ { "concept": "A", "individual": "a", "rel": ">=", "alpha": 1 },
                       { "concept": "A", "individual": "a", "rel": "<", "alpha": 0.5 } ] }"#,
    )
    .unwrap();
    let out = typik(&["--json", "entail", path(&kb), "T(A) -> B >= 1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["mode"], "VacuousUnsatisfiable");

    let out = typik(&["--json", "satisfiable", path(&kb)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["satisfiable"], false);
}

#[test]
fn bad_queries_and_usage_exit_2() {
    let kb = fixture_path("strict_only.json");
    let out = typik(&["entail", path(&kb), "T(A) -> B >="]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "query-syntax");

    let out = typik(&["entail", path(&kb), "T(Q) -> B >= 1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = typik(&["entail"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");

    assert_eq!(typik(&["--help"]).status.code(), Some(0));
}

#[test]
fn overrides_change_the_resolution() {
    let kb = fixture_path("strict_only.json");
    let out = typik(&["--json", "models", path(&kb), "--n", "1", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let models = stdout_json(&out);
    for m in models.as_array().unwrap() {
        for (_, d) in m["degrees"].as_object().unwrap() {
            assert!(d.as_str().unwrap().ends_with("/1"), "{m}");
        }
    }
}

#[test]
fn models_respects_limit() {
    let out = typik(&["--json", "models", path(&fixture_path("students.json")), "--limit", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let models = stdout_json(&out);
    let models = models.as_array().unwrap();
    assert!(!models.is_empty() && models.len() <= 3);
    assert!(models[0]["distinguished"]["Student"]["phi_n"].is_string());
}

#[test]
fn satisfiable_gives_a_sample_per_individual() {
    let out = typik(&["--json", "satisfiable", path(&fixture_path("penguin.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["satisfiable"], true);
    assert!(
        v["sample"]["reddy"].is_object() && v["sample"]["opus"].is_object(),
        "{v}"
    );
}

#[test]
fn emit_asp_writes_the_golden_programs() {
    let dir = tempfile::tempdir().unwrap();
    let program = dir.path().join("p.lp");
    let pref = dir.path().join("pref.lp");
    let out = typik(&[
        "emit-asp",
        path(&fixture_path("linear_bands.json")),
        "T(Comfort) -> Heat < 0.5",
        "--sum-aggregate",
        "--out",
        path(&program),
        "--pref",
        path(&pref),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let golden = |name| std::fs::read_to_string(golden_path(name)).unwrap();
    assert_eq!(std::fs::read_to_string(&program).unwrap(), golden("linear_bands.lp"));
    assert_eq!(std::fs::read_to_string(&pref).unwrap(), golden("preference.lp"));

    let stdout = typik(&["emit-asp", path(&fixture_path("penguin.json")), "T(Bird) -> Fly >= 0.8"]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), golden("penguin.lp"));
}

#[test]
fn import_nn_to_stdout_is_a_valid_kb() {
    let out = typik(&["import-nn", path(&fixture_path("monk_synthetic.json")), "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let kb = typik::parse_kb(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(kb.n, 5);
    assert!(kb.binary_inputs);
    assert_eq!(kb.inclusion_count(), 8 + 3);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let kb = import_monk(dir.path(), 5);
    let run = || typik(&["--json", "entail", &kb, "T(o) -> i1 & i4 >= 1", "--threads", "3"]);
    let strip = |o: Output| {
        let mut v = stdout_json(&o);
        v["stats"]["elapsed_ms"] = Value::Null;
        v
    };
    assert_eq!(strip(run()), strip(run()));
}
