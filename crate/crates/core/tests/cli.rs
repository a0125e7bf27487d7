use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn orbitavg(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_orbitavg")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (ok, out, err) = orbitavg(args);
    assert!(ok, "orbitavg {args:?} failed: {err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitavg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn average_prints_expression() {
    let v = json(&["average", "--lambda", "1,1", "--f", "x1*x2"]);
    assert_eq!(v["expr"], "(1/2)*x1*x2 + (1/2)*k1*k2");
}

#[test]
fn barrier_mode() {
    let v = json(&["corrections", "--lambda", "1,1", "--q", "x1^3", "--barrier"]);
    let s = v.to_string();
    assert!(s.contains("15/16"), "{s}");
}

#[test]
fn sphere_correction_forms() {
    let v = json(&["sphere-s", "--q", "x1"]);
    assert!(v.get("sigma_form").is_some() && v.get("reduced_form").is_some());
}

#[test]
fn bad_polynomial_is_an_error() {
    let (ok, _, err) = orbitavg(&["average", "--lambda", "1,1", "--f", "x1 +* x2"]);
    assert!(!ok);
    assert!(!err.is_empty());
}

#[test]
fn spectrum_then_verify() {
    let csv = scratch("spec.csv");
    let rects = scratch("rects.json");
    let (csv_s, rects_s) = (csv.to_str().unwrap(), rects.to_str().unwrap());
    let (ok, _, err) = orbitavg(&[
        "spectrum", "--h", "0.05", "--eps", "0.02", "--q", "x1", "--lmin", "8", "--lmax", "10", "--pad", "2", "--out", csv_s,
    ]);
    assert!(ok, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,re,im,cluster_k1,subcluster_value\n"));
    // l = 6..12 in the basis
    assert_eq!(text.lines().count() - 1, (6..=12).map(|l| 2 * l + 1).sum::<usize>());

    let (ok, _, err) = orbitavg(&["rectangles", "--h", "0.05", "--eps", "0.02", "--lmin", "8", "--lmax", "10", "--out", rects_s]);
    assert!(ok, "{err}");
    let rep = json(&["verify", "--spectrum", csv_s, "--rectangles", rects_s]);
    let clusters = rep["clusters"].as_array().unwrap();
    assert_eq!(clusters.len(), 3);
    for c in clusters {
        let k1 = c["k1"].as_u64().unwrap() as usize;
        assert_eq!(c["eigenvalues"].as_array().unwrap().len(), 2 * k1 + 1);
    }
}

#[test]
fn config_file_supplies_flags() {
    let cfg = scratch("avg.conf");
    std::fs::write(&cfg, "# defaults\nlambda = 1,2\n").unwrap();
    let v = json(&["--config", cfg.to_str().unwrap(), "average", "--f", "x1^2*x2"]);
    assert!(v["expr"].as_str().unwrap().contains("x1^2*x2"));
}
