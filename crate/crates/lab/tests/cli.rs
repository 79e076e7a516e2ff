mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data_dir;
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy-lab")).args(args).current_dir(data_dir()).output().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn holonomy_reports_matrix_and_trace() {
    let v = json(&lab(&["holonomy", "--graph", "square.json", "--connection", "su2_smooth.json", "--path", "e1,e2,e3,e4"]));
    assert_eq!(v["experiment"], "holonomy");
    assert_eq!(v["descriptor"]["kind"], "SU");
    assert_eq!(v["path"], serde_json::json!([1, 2, 3, 4]));
    let m = v["matrix"].as_array().unwrap();
    let diag = m[0][0][0].as_f64().unwrap() + m[1][1][0].as_f64().unwrap();
    assert!((diag - v["trace"][0].as_f64().unwrap()).abs() < 1e-15);
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-12);
    // The Wilson value is half the trace.
    let w = json(&lab(&["wilson", "--graph", "square.json", "--connection", "su2_smooth.json", "--path", "1,2,3,4"]));
    assert!((w["value"][0].as_f64().unwrap() - diag / 2.0).abs() < 1e-12);
}

#[test]
fn approx_meets_its_tolerance_and_writes_files() {
    let out = tempfile::tempdir().unwrap();
    let o = lab(&["approx", "--group", "su2", "--family", "star3_family.json", "--seed", "7", "--strict", "--out", out.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(out.path().join("approx.json")).unwrap()).unwrap();
    assert_eq!(v["verdict"], "met");
    assert!(v["max_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["errors"].as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(out.path().join("approx.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let dat = std::fs::read_to_string(out.path().join("approx.dat")).unwrap();
    assert!(dat.lines().all(|l| l.split_whitespace().count() == 2));
    // The written connection reproduces the report through `holonomy`.
    let conn = out.path().join("connection.json");
    let star = out.path().join("star.json");
    let fam: Value = serde_json::from_slice(&std::fs::read(data_dir().join("star3_family.json")).unwrap()).unwrap();
    std::fs::write(&star, fam["graph"].to_string()).unwrap();
    let h = json(&lab(&["holonomy", "--graph", star.to_str().unwrap(), "--connection", conn.to_str().unwrap(), "--path", "1"]));
    assert!(h["unitarity_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn impossible_tolerance_fails_only_in_strict_mode() {
    let args = ["approx", "--group", "su3", "--family", "star3_family.json", "--seed", "1", "--tolerance", "0", "--steps", "4"];
    let lenient = lab(&args);
    assert!(lenient.status.success());
    let v: Value = serde_json::from_slice(&lenient.stdout).unwrap();
    assert_eq!(v["verdict"], "not met");
    let strict = lab(&[&args[..], &["--strict"]].concat());
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn obstruction_of_the_commutator() {
    let v = json(&lab(&["obstruction", "--graph", "square.json", "--loops", "commutator"]));
    assert_eq!(v["loops"][0]["verdict"], "obstructed");
    let v = json(&lab(&["obstruction", "--graph", "commutator.json", "--loops", "7;1,2,3,4"]));
    assert_eq!(v["loops"][0]["verdict"], "obstructed");
    assert_eq!(v["loops"][0]["witness"]["connection"]["group"]["kind"], "torus");
    assert_eq!(v["loops"][1]["verdict"], "unobstructed");
    let all = json(&lab(&["obstruction", "--graph", "commutator.json"]));
    assert_eq!(all["loops"].as_array().unwrap().len(), 4);
}

#[test]
fn closure_verdicts_and_strict_exit_codes() {
    let flat = lab(&["closure", "--graph", "commutator.json", "--connection", "torus_flat.json", "--strict"]);
    let v = json(&flat);
    assert_eq!(v["verdict"]["member"], true);
    assert_eq!(v["mode"], "torus-abelianized");
    assert_eq!(v["bound"], 12);
    let kick = lab(&["closure", "--graph", "commutator.json", "--connection", "torus_kick.json", "--strict", "--bound", "6"]);
    assert_eq!(kick.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&kick.stdout).unwrap();
    assert_eq!(v["verdict"]["member"], false);
    assert_eq!(v["bound"], 6);
    let wrong = lab(&["closure", "--graph", "commutator.json", "--connection", "torus_flat.json", "--mode", "product"]);
    assert_eq!(wrong.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("closure descriptor"));
}

#[test]
fn theta_and_gauge_orbit() {
    let v = json(&lab(&["theta", "--graph", "square.json", "--connection", "su2_smooth.json"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert!(v["roundtrip_error"].as_f64().unwrap() <= 1e-12);
    let v = json(&lab(&["gauge-orbit", "--graph", "square.json", "--connection", "su2_smooth.json", "--function", "wilson_loop.json", "--seed", "2"]));
    assert!(v["invariance_deviation"].as_f64().unwrap() <= 1e-12);
    assert!(v["normal_form_spread"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["degenerate"], false);
}

#[test]
fn haar_mean_matches_the_loop_value() {
    let v = json(&lab(&["haar-mean", "--graph", "square.json", "--connection", "su2_smooth.json", "--function", "entry_squared.json", "--seed", "4", "--samples", "40000"]));
    let w = json(&lab(&["wilson", "--graph", "square.json", "--connection", "su2_smooth.json", "--path", "1,2,3,4"]));
    let tr = 2.0 * w["value"][0].as_f64().unwrap();
    let expected = (tr * tr + 2.0) / 6.0;
    let mean = v["mean"][0].as_f64().unwrap();
    assert!((mean - expected).abs() <= 4.0 * v["std_error"].as_f64().unwrap(), "{mean} vs {expected}");
    assert_eq!(v["samples"], 40000);
    assert_eq!(v["endpoints"], serde_json::json!([0]));
}

#[test]
fn errors_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vertices\": [\n  {\"id\": \"zero\"}\n]}").unwrap();
    let o = lab(&["theta", "--graph", bad.to_str().unwrap(), "--connection", "su2_smooth.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
    let o = lab(&["holonomy", "--graph", "square.json", "--connection", "torus_flat.json", "--path", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generalized connection"), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!Path::new("holonomy.json").exists());
}
