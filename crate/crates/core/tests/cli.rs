use std::fs;

use serde_json::Value;
use signlab::cli::{run, EXIT_OK, EXIT_USAGE};

fn out_dir() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn args(dir: &std::path::Path, rest: &[&str]) -> Vec<String> {
    let mut v = vec!["signlab".to_string(), "--out".into(), dir.display().to_string()];
    v.extend(rest.iter().map(|s| s.to_string()));
    v
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let d = out_dir();
    assert_eq!(run(args(d.path(), &["verify", "--suite", "nope"])), EXIT_USAGE);
    assert!(fs::read_dir(d.path()).unwrap().next().is_none());
}

#[test]
fn bad_arguments_exit_two() {
    let d = out_dir();
    assert_eq!(run(args(d.path(), &["search", "--dim", "0", "--sign", "plus"])), EXIT_USAGE);
    assert_eq!(run(args(d.path(), &["search", "--dim", "1", "--sign", "up"])), EXIT_USAGE);
    assert_eq!(run(args(d.path(), &["search", "--dim", "1", "--sign", "plus", "--tol", "-1"])), EXIT_USAGE);
    assert_eq!(run(args(d.path(), &["frobnicate"])), EXIT_USAGE);
    assert_eq!(run(["signlab", "--version"]), EXIT_OK);
}

#[test]
fn verify_writes_a_report() {
    let d = out_dir();
    assert_eq!(run(args(d.path(), &["verify", "--suite", "improvement"])), EXIT_OK);
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("verify-improvement.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert!(results.iter().all(|r| r["margin"].as_f64().unwrap() >= 0.0));
}

#[test]
fn search_writes_json_and_trace() {
    let d = out_dir();
    let code = run(args(d.path(), &["search", "--dim", "1", "--sign", "minus", "--degree", "20", "--tol", "1e-2", "--grid", "200"]));
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("search-d1-minus.json")).unwrap()).unwrap();
    let r = v["r_upper"].as_f64().unwrap();
    assert!(r >= 0.99 && r < 1.2, "r_upper = {r}");
    let csv = fs::read_to_string(d.path().join("search-d1-minus.csv")).unwrap();
    assert!(csv.starts_with("r,slack_t,feasible\n"));
    assert!(csv.lines().count() > 3);
}

#[test]
fn transform_reports_each_stage() {
    let d = out_dir();
    let pipe = d.path().join("tent.json");
    fs::write(
        &pipe,
        r#"{"base": {"dim": 1, "closed_form": {"kind": "tent"}},
            "stages": [{"op": "eigen_symmetrize", "params": {"sign": "-"}}]}"#,
    )
    .unwrap();
    let input = d.path().join("input.json");
    fs::write(&input, r#"{"dim": 1, "closed_form": {"kind": "sinc_sq"}}"#).unwrap();
    let code = run(args(d.path(), &["transform", pipe.to_str().unwrap(), "--input", input.to_str().unwrap(), "--grid", "9"]));
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("transform-tent.json")).unwrap()).unwrap();
    let last = &v["stages"][1];
    // sinc^2 - tent: the extremal -1 eigenfunction
    assert_eq!(last["f0"].as_f64().unwrap(), 0.0);
    assert!((last["r_f"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(last["member_minus"], true);
    assert_eq!(last["member_plus"], false);
    let csv = fs::read_to_string(d.path().join("transform-tent.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,f(x),fhat(x)"));
    assert_eq!(csv.lines().count(), 10);
    // the pipeline file itself is untouched
    assert!(fs::read_to_string(&pipe).unwrap().contains("eigen_symmetrize"));
}

#[test]
fn malformed_pipeline_is_a_usage_error() {
    let d = out_dir();
    let pipe = d.path().join("bad.json");
    fs::write(&pipe, r#"{"base": {"dim": 1, "closed_form": {"kind": "tent"}}, "stages": [{"op": "fold"}]}"#).unwrap();
    assert_eq!(run(args(d.path(), &["transform", pipe.to_str().unwrap()])), EXIT_USAGE);
    assert_eq!(run(args(d.path(), &["transform", "/nonexistent/p.json"])), EXIT_USAGE);
}
