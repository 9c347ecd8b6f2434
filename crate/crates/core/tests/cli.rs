use std::fs;
use std::path::{Path, PathBuf};

use hkit::cli::run;
use serde_json::{json, Value};
use tempfile::TempDir;

fn hkit(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("hkit").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok_json(args: &[&str]) -> Value {
    let (code, out, err) = hkit(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn write(dir: &TempDir, name: &str, v: Value) -> String {
    let path = dir.path().join(name);
    fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn cube(dir: &TempDir, name: &str, lo: i64, hi: i64) -> String {
    write(dir, name, json!({"type": "V", "vertices": [[lo, lo], [hi, lo], [hi, hi], [lo, hi]]}))
}

#[test]
fn hausdorff_of_nested_squares() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (cube(&dir, "p.json", 0, 1), cube(&dir, "q.json", -1, 2));
    let v = ok_json(&["hausdorff", "--norm", "linf", &p, &q]);
    assert_eq!(v["value"], "1");
    assert_eq!(v["directed_pq"]["value"], "0");
    let v = ok_json(&["hausdorff", "--norm", "l2", &p, &q]);
    assert_eq!(v["value"], "2");
    assert_eq!(v["squared"], true);
}

#[test]
fn distance_to_h_polytope() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", json!({"type": "H", "rows": [
        {"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 1}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 1}
    ]}));
    let v = ok_json(&["distance", "--norm", "l1", "--point", "[\"5/2\", 3]", &h]);
    assert_eq!(v["value"], "7/2");
}

#[test]
fn match_approx_recovers_box_homothety() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (cube(&dir, "p.json", 0, 1), cube(&dir, "q.json", 2, 4));
    let v = ok_json(&["match-approx", &p, &q]);
    assert_eq!(v["witness"]["alpha"], "2");
    assert_eq!(v["witness"]["c"], json!(["2", "2"]));
    assert_eq!(v["value"], "0");
}

#[test]
fn match_under_polytopal_and_euclidean_norms() {
    let dir = TempDir::new().unwrap();
    let p = cube(&dir, "p.json", -1, 1);
    let q = write(&dir, "q.json", json!({"type": "V", "vertices": [[2, 0], [0, 2], [-2, 0], [0, -2]]}));
    let v = ok_json(&["match", "--norm", "l2", "--tol", "1e-9", &p, &q]);
    let rho = v["rho"].as_f64().unwrap();
    assert!((rho - (2.0 - 2f64.sqrt())).abs() < 1e-6, "{rho}");
    let v = ok_json(&["match", "--norm", "linf", &p, &q]);
    assert_eq!(v["exact"], true);
}

#[test]
fn clique_instance_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    ok_json(&["gen-clique", "--m", "3", "--k", "3", "--edges", "1-2,2-3,1-3", "--out", out]);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["has_clique"], true);
    let path = |n: &str| -> PathBuf { dir.path().join(n) };
    let p = path("P.json");
    let q = path("Q.json");
    let v = ok_json(&["hausdorff", "--norm", "l1", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(v["value"], meta["k_epsilon"]);
}

#[test]
fn vertex_enum_of_square() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", json!({"type": "H", "rows": [
        {"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 0}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 0}
    ]}));
    let v = ok_json(&["vertex-enum", &h]);
    assert_eq!(v["type"], "V");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn certify_reports_status() {
    let dir = TempDir::new().unwrap();
    let p = cube(&dir, "p.json", 0, 2);
    let q = cube(&dir, "q.json", 0, 2);
    let cert = write(&dir, "c.json", json!({"rho": 1.0, "R": [[0, 0]], "S": [[2, 2]]}));
    let v = ok_json(&["certify", &p, &q, &cert]);
    assert_eq!(v["status"], "violated");
    assert!(v["condition"].as_u64().is_some());
}

#[test]
fn check_properties_passes() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (cube(&dir, "p.json", 0, 1), cube(&dir, "q.json", -1, 3));
    let (code, out, err) = hkit(&["check-properties", "--samples", "5", &p, &q]);
    assert_eq!(code, 0, "{err}");
    assert!(!out.is_empty());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = cube(&dir, "p.json", 0, 1);
    let missing = Path::new("/nonexistent/p.json").to_str().unwrap();
    assert_eq!(hkit(&["hausdorff", &p, missing]).0, 2);
    assert_eq!(hkit(&["hausdorff", "--norm", "l7", &p, &p]).0, 2);
    let unbounded = write(&dir, "u.json", json!({"type": "H", "rows": [{"a": [1, 0], "b": 1}]}));
    let (code, _, err) = hkit(&["hausdorff", &p, &unbounded]);
    assert_eq!(code, 2);
    assert!(err.contains("u.json"), "{err}");
    let rows: Vec<Value> = (0..9)
        .flat_map(|i| {
            let mut a = vec![0i64; 9];
            a[i] = 1;
            let b: Vec<i64> = a.iter().map(|v| -v).collect();
            [json!({"a": a, "b": 1}), json!({"a": b, "b": 1})]
        })
        .collect();
    let big = write(&dir, "big.json", json!({"type": "H", "rows": rows}));
    assert_eq!(hkit(&["vertex-enum", &big]).0, 3);
    assert_eq!(hkit(&["--help"]).0, 0);
    assert_eq!(hkit(&["no-such-command"]).0, 2);
}
