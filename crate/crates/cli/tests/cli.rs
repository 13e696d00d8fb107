use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn polyangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyangle"))
        .args(args)
        .output()
        .expect("failed to launch polyangle")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad line {l:?}: {e}")))
        .collect()
}

fn of_kind<'a>(rs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    rs.iter().filter(|r| r["record"] == kind).collect()
}

fn summary(rs: &[Value]) -> &Value {
    let last = rs.last().expect("empty report");
    assert_eq!(last["record"], "summary");
    last
}

#[test]
fn cube_vertex_angles_are_octants() {
    let out = polyangle(&["angles", "--builtin", "cube", "3", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let angles = of_kind(&rs, "angle");
    assert_eq!(angles.len(), 8);
    for a in angles {
        assert!((a["raw"].as_f64().unwrap() - PI / 2.0).abs() < 1e-12);
        assert_eq!(a["method"], "exact-3d-vertex");
    }
    assert_eq!(summary(&rs)["passed"], true);
}

#[test]
fn triangle_file_angles_sum_to_pi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.json");
    fs::write(&path, r#"{"dim": 2, "vertices": [[0, 0], [4, 0], [1, 3]]}"#).unwrap();
    let out = polyangle(&["angles", path.to_str().unwrap(), "--k", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = records(&out);
    let angles = of_kind(&rs, "angle");
    assert_eq!(angles.len(), 3);
    let sum: f64 = angles.iter().map(|a| a["raw"].as_f64().unwrap()).sum();
    assert!((sum - PI).abs() < 1e-12);
    let total = of_kind(&rs, "total")[0]["raw"].as_f64().unwrap();
    assert!((total - PI).abs() < 1e-12);
}

#[test]
fn malformed_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"dim\": 2,\n \"vertices\": [[0, 0], [1, 0]\n").unwrap();
    let out = polyangle(&["angles", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "no position in diagnostic: {err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_and_unknown_builtin_are_input_errors() {
    assert_eq!(polyangle(&["angles", "/nonexistent/polytope.json"]).status.code(), Some(2));
    assert_eq!(polyangle(&["angles", "--builtin", "dodecahedron", "1"]).status.code(), Some(2));
    assert_eq!(polyangle(&["angles", "--builtin", "cube", "three"]).status.code(), Some(2));
    assert_eq!(polyangle(&["angles"]).status.code(), Some(2));
}

#[test]
fn simulate_regular_tetrahedron() {
    let out = polyangle(&["simulate", "--builtin", "regular-simplex", "3", "--samples", "200000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let exp = of_kind(&rs, "experiment")[0];
    let prediction = exp["prediction"].as_f64().unwrap();
    assert!((prediction - 2.0 * (23.0_f64 / 27.0).acos() / PI).abs() < 1e-12);
    let estimate = exp["estimate"].as_f64().unwrap();
    let stderr = exp["stderr"].as_f64().unwrap();
    assert!((estimate - prediction).abs() <= 4.0 * stderr);
    assert_eq!(exp["seed"], 3);
    assert_eq!(summary(&rs)["passed"], true);
}

#[test]
fn simulate_cube_vertex_count() {
    let out = polyangle(&["simulate", "--builtin", "cube", "3", "--k", "0", "--samples", "50000"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let exp = of_kind(&rs, "experiment")[0];
    assert!((exp["estimate"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!((exp["prediction"].as_f64().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn simulate_triangle_is_always_a_segment() {
    let out = polyangle(&["simulate", "--builtin", "random-simplex", "11", "--dim", "2", "--samples", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    assert_eq!(of_kind(&rs, "experiment")[0]["estimate"].as_f64(), Some(1.0));
}

#[test]
fn simulate_non_simplex_needs_k() {
    let out = polyangle(&["simulate", "--builtin", "cube", "3", "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_cube_and_random_tetrahedron() {
    for args in [
        &["verify", "--builtin", "cube", "3"][..],
        &["verify", "--builtin", "random-simplex", "21", "--samples", "200000"][..],
    ] {
        let out = polyangle(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let rs = records(&out);
        let checks = of_kind(&rs, "check");
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["passed"] == true), "{args:?}: {checks:?}");
    }
}

#[test]
fn verify_four_simplex_by_sampling() {
    let out = polyangle(&["verify", "--builtin", "regular-simplex", "4", "--samples", "1000000", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rs = records(&out);
    let names: Vec<&str> = of_kind(&rs, "check").iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["gram-euler", "simplex-angle-sum", "gaddum-bounds"]);
    assert_eq!(summary(&rs)["method"], "monte-carlo");
}

#[test]
fn exact_method_is_unavailable_above_three_dimensions() {
    let out = polyangle(&["angles", "--builtin", "regular-simplex", "4", "--method", "exact", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_families_trend_toward_the_bounds() {
    let out = polyangle(&["scan", "--family", "flat-apex", "--from", "1e-3", "--to", "10", "--steps", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let p: Vec<f64> = of_kind(&rs, "scan").iter().map(|r| r["probability"].as_f64().unwrap()).collect();
    assert_eq!(p.len(), 20);
    assert!(p[0] > 0.99);
    assert!(p.iter().all(|&x| x > 0.0 && x < 1.0));
    assert_eq!(of_kind(&rs, "scan")[0]["parameter"].as_f64(), Some(1e-3));

    let out = polyangle(&["scan", "--family", "skew-segments", "--from", "1e-3", "--to", "1", "--steps", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<(f64, f64)> = of_kind(&records(&out), "scan")
        .iter()
        .map(|r| (r["parameter"].as_f64().unwrap(), r["probability"].as_f64().unwrap()))
        .collect();
    assert!(rows[0].1 < 0.01);
    assert!(rows.iter().all(|&(_, x)| x > 0.0 && x < 1.0));
    // increasing while the segments are close; the curve peaks near d = 0.7
    let near: Vec<f64> = rows.iter().filter(|r| r.0 <= 0.5).map(|r| r.1).collect();
    assert!(near.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn scan_with_zero_steps_is_a_usage_error() {
    let out = polyangle(&["scan", "--family", "flat-apex", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = polyangle(&["scan", "--family", "pyramid"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for path in [&a, &b] {
        let out = polyangle(&[
            "simulate", "--builtin", "regular-simplex", "3", "--samples", "100000", "--seed", "9", "--workers", "3",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn runtime_never_appears_in_reports() {
    let out = polyangle(&["simulate", "--builtin", "cube", "3", "--k", "1", "--samples", "10000"]);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("runtime"));
}
