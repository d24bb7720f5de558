use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn smallcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn validate_bundled_fixture() {
    let out = smallcover(&["validate", "--fixture", "RP2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);
}

#[test]
fn duplicated_lambda_row_names_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rp2-bad.json");
    let text = r#"{"name": "RP2-bad", "polytope": {"generator": "simplex", "n": 2}, "lambda": ["10", "10", "01"]}"#;
    fs::write(&path, text).unwrap();
    let out = smallcover(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("vertex 2"), "{err}");
}

#[test]
fn io_and_schema_errors_exit_one() {
    assert_eq!(smallcover(&["validate", "/nonexistent/p.json"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\n  \"dim\": 2,\n  \"facets\": ,\n}").unwrap();
    let out = smallcover(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(smallcover(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn polytope_file_with_separate_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("square.json");
    let lambda = dir.path().join("lambda.json");
    fs::write(&poly, r#"{"dim": 2, "facets": 4, "vertices": [[0,2],[1,2],[0,3],[1,3]]}"#).unwrap();
    fs::write(&lambda, r#"[[1,0],[1,0],[0,1],[0,1]]"#).unwrap();
    let out = smallcover(&["homology", poly.to_str().unwrap(), "--lambda", lambda.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["betti_X"], serde_json::json!([1, 2, 1]));
    let out = smallcover(&["validate", poly.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn report_fields() {
    let out = smallcover(&["report", "--fixture", "T3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["betti_Q"], serde_json::json!([1, 0, 0, 1]));
    for key in ["orientable", "xi", "unique", "betti_X", "h_vector", "formality_pass", "doubling_isomorphic", "filtration_pass"] {
        assert!(!r[key].is_null(), "missing {key}");
    }

    let rp2 = stdout_json(&smallcover(&["report", "--fixture", "RP2"]));
    assert_eq!(rp2["orientable"], false);
    assert!(rp2.get("betti_Q").is_none());
    assert_eq!(stdout_json(&smallcover(&["report", "--fixture", "RP4"]))["orientable"], false);
}

#[test]
fn reports_are_deterministic() {
    let a = smallcover(&["report", "--all"]);
    let b = smallcover(&["report", "--all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 12);
}

#[test]
fn subtorus_and_orientability() {
    let t2 = stdout_json(&smallcover(&["subtorus", "--fixture", "T2", "--json"]));
    assert_eq!(t2["exists"], true);
    assert_eq!(t2["xi"], "11");
    assert_eq!(t2["general_position"], true);
    let rp2 = smallcover(&["subtorus", "--fixture", "RP2", "--json"]);
    assert_eq!(rp2.status.code(), Some(0));
    assert_eq!(stdout_json(&rp2)["exists"], false);
    let rp3 = stdout_json(&smallcover(&["orientable", "--fixture", "RP3", "--json"]));
    assert_eq!(rp3["orientable"], true);
    assert_eq!(rp3["functionals_found"], 1);
}

#[test]
fn quotient_of_non_orientable_cover_is_refused() {
    let out = smallcover(&["quotient", "--fixture", "pentagon-3coloring"]);
    assert_eq!(out.status.code(), Some(2));
    let ok = stdout_json(&smallcover(&["quotient", "--fixture", "M2-hexagon", "--json"]));
    assert_eq!(ok["betti_Q"], serde_json::json!([1, 0, 1]));
}

#[test]
fn complex_dump_format() {
    let out = smallcover(&["quotient", "--fixture", "T2", "--dump"]);
    assert_eq!(out.status.code(), Some(0));
    let dump = stdout_json(&out);
    assert_eq!(dump["cells"]["2"].as_array().unwrap().len(), 2);
    assert_eq!(dump["cells"]["0"].as_array().unwrap().len(), 4);
    let top = dump["cells"]["2"][0].as_str().unwrap();
    assert_eq!(dump["boundary"][top].as_array().unwrap().len(), 4);
}

#[test]
fn standard_action_outputs() {
    let out = smallcover(&[
        "standard-action", "--n", "4", "--zero-set", "0,1,2", "--check-rotations", "--sphere-quotient", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["order"], 4);
    assert_eq!(v["formula_order"], 4);
    assert_eq!(v["rotation_generated"], true);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 1]));

    let control = stdout_json(&smallcover(&[
        "standard-action", "--n", "4", "--generators", "1111", "--check-rotations", "--sphere-quotient", "--json",
    ]));
    assert_eq!(control["rotation_generated"], false);
    assert_eq!(control["betti"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn doubling_command() {
    let out = smallcover(&["doubling", "--fixture", "T3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["cells"], serde_json::json!([8, 12, 6, 2]));
    assert_eq!(v["isomorphic_to_quotient"], true);
}

#[test]
fn selftest_passes_and_filters() {
    let out = smallcover(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 11);

    let out = smallcover(&["selftest", "--filter", "sphere"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let ids: Vec<&str> = text.lines().map(|l| &l[..3]).collect();
    assert_eq!(ids, ["C01", "C07"]);
}

#[test]
fn tampered_fixture_fails_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let out = smallcover(&["export-fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 12);

    let fixtures = dir.path().to_str().unwrap();
    assert_eq!(smallcover(&["selftest", "--fixtures", fixtures]).status.code(), Some(0));

    let path = dir.path().join("T3.json");
    let mut fixture: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    fixture["expected"]["betti_Q"] = serde_json::json!([1, 1, 1, 1]);
    fs::write(&path, serde_json::to_string_pretty(&fixture).unwrap()).unwrap();

    let out = smallcover(&["selftest", "--fixtures", fixtures]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("C01") && l.contains("FAIL")), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("C01 sphere-quotient"));
}
