use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn riesz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz")).args(args).output().expect("binary runs")
}

fn run_in(dir: &TempDir, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", dir.path().to_str().unwrap()]);
    riesz(&all)
}

fn read_json(dir: &TempDir, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.path().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn points(set: &Value) -> Vec<(f64, f64)> {
    set["points"].as_array().unwrap().iter().map(|p| (p["z"][0].as_f64().unwrap(), p["z"][1].as_f64().unwrap())).collect()
}

fn is_empty(set: &Value) -> bool {
    ["points", "regions", "sequences"].iter().all(|k| set[k].as_array().unwrap().is_empty())
}

fn stdout_paths(out: &Output, dir: &TempDir) -> Vec<String> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<String> = text.lines().map(str::to_string).collect();
    for l in &lines {
        assert!(Path::new(l).starts_with(dir.path()), "stdout line is not an output path: {l}");
        assert!(Path::new(l).exists(), "{l}");
    }
    lines
}

#[test]
fn block_spectra_of_nilpotent_plus_scalar() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["spectrum", "--input", data("e1.json").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_paths(&out, &dir).len(), 2);
    let s = read_json(&dir, "spectra.json");
    let mut sigma = points(&s["sigma"]);
    sigma.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert_eq!(sigma.len(), 2);
    assert!(sigma[0].0.abs() < 1e-8 && (sigma[1].0 - 2.0).abs() < 1e-8);
    assert_eq!(points(&s["p00"]).len(), 1);
    assert!(is_empty(&s["sigma_dr"]));
    assert!(dir.path().join("spectra.csv").exists());
}

#[test]
fn unit_has_empty_drazin_riesz_spectrum() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["spectrum", "--input", data("unit.json").to_str().unwrap()]);
    assert!(out.status.success());
    let s = read_json(&dir, "spectra.json");
    assert!(is_empty(&s["sigma_dr"]));
    assert_eq!(points(&s["sigma"]), vec![(1.0, 0.0)]);
}

#[test]
fn browder_spectrum_keeps_the_disc() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["spectrum", "--input", data("e4.json").to_str().unwrap()]);
    assert!(out.status.success());
    let s = read_json(&dir, "spectra.json");
    let regions = s["sigma_b"]["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 1);
    assert_eq!(regions[0]["kind"], "disc");
    assert_eq!(regions[0]["radius"].as_f64(), Some(0.5));
}

#[test]
fn harmonic_window_two_inverts_the_first_two_terms() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["gdr", "--input", data("harmonic.json").to_str().unwrap(), "--window", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_paths(&out, &dir).len(), 4);
    let inv = read_json(&dir, "inverse.json");
    let lane = &inv["lanes"][0];
    let prefix: Vec<f64> = lane["prefix"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    assert_eq!(prefix.len(), 2);
    assert!((prefix[0] - 1.0).abs() < 1e-12 && (prefix[1] - 2.0).abs() < 1e-12);
    assert_eq!(lane["tail"]["kind"], "zero");
    let cert = read_json(&dir, "certificate.json");
    assert_eq!(cert["valid"], true);
    let u = read_json(&dir, "uniqueness.json");
    assert_eq!(u["unique"], false);
    assert_eq!(read_json(&dir, "characterization.json")["gdr"], true);
}

#[test]
fn shift_analog_is_rejected_unless_report_only() {
    let input = data("shift.json");
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["gdr", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("condition (1) fails"));
    assert_eq!(read_json(&dir, "characterization.json")["gdr"], false);
    assert!(!dir.path().join("inverse.json").exists());

    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["gdr", "--input", input.to_str().unwrap(), "--report-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_paths(&out, &dir).len(), 1);
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"backend\": \"block\", \"blocks\": [[[1]]]").unwrap();
    let out = run_in(&dir, &["spectrum", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn matrix_market_input_is_accepted() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["gdr", "--input", data("jordan.mtx").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_json(&dir, "certificate.json")["valid"], true);
}

#[test]
fn verify_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["verify", "--trials", "1", "--seed", "7"];
    let ra = run_in(&a, &args);
    let rb = run_in(&b, &args);
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(rb.status.success());
    let ja = std::fs::read(a.path().join("verify.json")).unwrap();
    let jb = std::fs::read(b.path().join("verify.json")).unwrap();
    assert_eq!(ja, jb);
    let report: Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(report["passed"], true);
    let tags: Vec<&str> = report["theorems"].as_array().unwrap().iter().map(|t| t["tag"].as_str().unwrap()).collect();
    for tag in ["T2.1", "L2.4", "T3.2", "T4.3", "T4.4", "T4.6", "T4.7", "T4.8", "T4.10", "P4.13", "T5.3", "T5.4", "T6.1", "T6.2", "T6.3", "T6.4", "P6.5"] {
        assert!(tags.contains(&tag), "{tag}");
    }
}

#[test]
fn loose_tolerance_is_reported() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["verify", "--trials", "1", "--seed", "7", "--tol", "1e-2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside validated range"));
    let report = read_json(&dir, "verify.json");
    assert!(!report["config_warnings"].as_array().unwrap().is_empty());
}

#[test]
fn non_positive_tolerance_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run_in(&dir, &["verify", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}
