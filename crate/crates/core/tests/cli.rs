mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use commutant::cli::{
    run_scenario, parse_scenarios, CatalogReport, ClassifyReport, NormalityCliReport, Report,
    SpectrumReport, SvdReport, VerifyReport, SCHEMA,
};
use commutant::cli::Command as Sub;
use common::scenario_path;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

fn commutant(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commutant"))
        .args(args)
        .env("COMMUTANT_OUT", out)
        .output()
        .unwrap()
}

fn run_file(cmd: &str, scenario: &str, out: &Path) -> Output {
    let path = scenario_path(scenario);
    commutant(&[cmd, "--scenario", path.to_str().unwrap()], out)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn catalog_list_names_every_family() {
    let dir = TempDir::new().unwrap();
    let out = commutant(&["catalog", "--list"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    for name in ["Main", "Special1", "Special4", "C2Item1", "C2Item4"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = TempDir::new().unwrap();
    let out = run_file("verify", "sine_kernel_verify.json", dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&dir.path().join("sine_kernel_verify.json"));
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["command"], "verify");
    assert!(v["result"]["grid_residual_max"].as_f64().unwrap() <= 1e-10);
    let csv = fs::read_to_string(dir.path().join("sine_kernel_verify.csv")).unwrap();
    assert!(csv.starts_with("y_re,y_im,z_re,z_im,abs_residual,relative_residual\n"));
}

#[test]
fn svd_table_has_one_row_per_mode() {
    let dir = TempDir::new().unwrap();
    let out = run_file("svd", "sine_kernel_svd.json", dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sine_kernel_svd.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,chi_re,chi_im,sigma,cross_residual,normal_residual"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn reruns_are_byte_identical() {
    let (d1, d2) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&d1, &d2] {
        assert!(run_file("spectrum", "prolate_spectrum.json", d.path()).status.success());
    }
    for ext in ["csv", "json"] {
        let name = format!("prolate_spectrum.{ext}");
        assert_eq!(fs::read(d1.path().join(&name)).unwrap(), fs::read(d2.path().join(&name)).unwrap());
    }
}

#[test]
fn batches_run_in_parallel_with_the_same_results() {
    let (d1, d4) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let path = scenario_path("normality.json");
    let p = path.to_str().unwrap();
    assert!(commutant(&["normality", "--scenario", p], d1.path()).status.success());
    assert!(commutant(&["normality", "--scenario", p, "--jobs", "4"], d4.path()).status.success());
    let mut names: Vec<_> = fs::read_dir(d1.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 6);
    for n in names {
        assert_eq!(fs::read(d1.path().join(&n)).unwrap(), fs::read(d4.path().join(&n)).unwrap());
    }
}

#[test]
fn malformed_scenarios_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x", "pair": {"case": "Main", "lambda": [1, 0]}}"#).unwrap();
    let out = commutant(&["verify", "--scenario", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    fs::write(&bad, r#"{"name": "x", "pair": {"case": "Special2", "lambda": [1, 0], "alpha": [0, 0], "beta": [0, 0]}}"#).unwrap();
    let out = commutant(&["catalog", "--scenario", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = commutant(&["verify"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missed_tolerances_exit_with_three_and_still_write() {
    let dir = TempDir::new().unwrap();
    let path = scenario_path("prolate_spectrum.json");
    let out = commutant(&["spectrum", "--scenario", path.to_str().unwrap(), "--tol", "1e-30"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let v = read_json(&dir.path().join("prolate_spectrum.json"));
    assert_eq!(v["result"]["passed"], false);
}

#[test]
fn empty_results_are_valid_documents() {
    let sc = &parse_scenarios(r#"{"name": "nothing"}"#).unwrap()[0];
    let out = run_scenario(Sub::Normality, sc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out.json).unwrap();
    assert_eq!(v["result"]["operators"], serde_json::json!([]));
    assert!(out.csv.is_none());
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(json: &str) {
    let r: Report<T> = serde_json::from_str(json).unwrap();
    let again = serde_json::to_string_pretty(&r).unwrap();
    let back: Report<T> = serde_json::from_str(&again).unwrap();
    assert_eq!(r, back);
}

#[test]
fn every_report_type_survives_a_round_trip() {
    let load = |file: &str| parse_scenarios(&fs::read_to_string(scenario_path(file)).unwrap()).unwrap();
    for sc in load("catalog.json") {
        round_trip::<CatalogReport>(&run_scenario(Sub::Catalog { list: false }, &sc).unwrap().json);
    }
    let sc = &load("sine_kernel_verify.json")[0];
    round_trip::<VerifyReport>(&run_scenario(Sub::Verify, sc).unwrap().json);
    let sc = &load("legendre_spectrum.json")[0];
    round_trip::<SpectrumReport>(&run_scenario(Sub::Spectrum, sc).unwrap().json);
    let sc = &load("sine_kernel_svd.json")[0];
    round_trip::<SvdReport>(&run_scenario(Sub::Svd, sc).unwrap().json);
    for sc in load("classify.json") {
        round_trip::<ClassifyReport>(&run_scenario(Sub::Classify, &sc).unwrap().json);
    }
    for sc in load("normality.json") {
        round_trip::<NormalityCliReport>(&run_scenario(Sub::Normality, &sc).unwrap().json);
    }
}
