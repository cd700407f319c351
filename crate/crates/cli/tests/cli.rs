use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use majorant::{fourier_matrix, ComplexMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorant")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_matrix(dir: &TempDir, name: &str, m: &ComplexMatrix) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, m.to_json_string()).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect()).collect()
}

#[test]
fn bounds_for_fourier_and_identity() {
    let dir = TempDir::new().unwrap();
    let f3 = write_matrix(&dir, "f3.json", &fourier_matrix(3));
    let o = run(&["bounds", "--input", p(&f3), "--alpha", "1", "--alpha", "inf"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["s"].as_array().unwrap().len(), 3);
    assert_eq!(v["truncations"].as_array().unwrap().len(), 2);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[1]["alpha"], "inf");
    assert!((reports[0]["mu"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);

    let id = write_matrix(&dir, "id.json", &ComplexMatrix::identity(4));
    let o = run(&["bounds", "--input", p(&id), "--format", "csv", "--alpha", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("alpha,deutsch,mu,ladder_1,ladder_2,ladder_3\n"));
    assert!(csv_rows(&text)[0][1..].iter().all(|x| *x == 0.0));
}

#[test]
fn bounds_rejects_non_unitary() {
    let dir = TempDir::new().unwrap();
    let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
    let path = write_matrix(&dir, "bad.json", &m);
    let o = run(&["bounds", "--input", p(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unitarity residual"));

    let o = run(&["bounds", "--input", p(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rotation_sweep_peaks_at_quarter_turn() {
    let o = run(&["sweep", "--family", "rotation", "--steps", "100", "--alpha", "inf"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("parameter,alpha,deutsch,mu,ladder_1\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    let (imax, max) =
        rows.iter().map(|r| r[4]).enumerate().fold((0, 0.0), |a, (i, x)| if x > a.1 { (i, x) } else { a });
    assert_eq!(imax, 50);
    assert!((max - 0.316694).abs() < 1e-6);

    let o = run(&[
        "sweep", "--family", "rotation", "--steps", "4", "--alpha", "0.5", "--alpha", "1", "--alpha", "2", "--alpha",
        "inf",
    ]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 20);
}

#[test]
fn perm_power_sweeps() {
    let o = run(&["sweep", "--family", "perm_power", "--n", "3", "--steps", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    for r in [&rows[0], &rows[20]] {
        assert!(r[2..].iter().all(|x| x.abs() < 1e-12), "{r:?}");
    }
    let o = run(&["sweep", "--family", "perm-power", "--n", "4", "--steps", "40", "--range", "0:1"]);
    for r in csv_rows(&stdout(&o)) {
        assert!(r[4] <= r[5] + 1e-12 && r[5] <= r[6] + 1e-12);
    }
    assert_eq!(run(&["sweep", "--family", "shear"]).status.code(), Some(2));
}

#[test]
fn scan_writes_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&["scan", "--grid-step", "0.05", "--output", p(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("a,b,feasible,b_mu,b_ladder_2,diff\n"));
    assert_eq!(text.lines().count(), 1 + 21 * 22 / 2);
    assert_eq!(run(&["scan", "--grid-step", "0.5"]).status.code(), Some(2));
}

#[test]
fn monte_carlo_rate_for_qubits() {
    let o = run(&["mc", "--n", "2", "--samples", "100000", "--seed", "42"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rate = v["rate"].as_f64().unwrap();
    assert!((0.80..=0.83).contains(&rate), "rate {rate}");
    assert_eq!(v["samples"], 100000);
    assert_eq!(v["seed"]["seed"], 42);

    let o = run(&["mc", "--n", "3", "--samples", "500", "--histogram", "10", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("bin_lo,bin_hi,count\n"));
    assert_eq!(csv_rows(&text).iter().map(|r| r[2]).sum::<f64>(), 500.0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        assert!(run(&["mc", "--n", "4", "--samples", "2000", "--seed", "5", "--output", p(path)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn fuzz_reports_no_violations() {
    let o = run(&["fuzz", "--n", "3", "--samples", "2000"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn classical_checks() {
    let dir = TempDir::new().unwrap();
    let id = write_matrix(&dir, "id.json", &ComplexMatrix::identity(3));
    let o = run(&["classical", "--input", p(&id), "--prob", "0.2,0.3,0.5"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"].as_f64().unwrap(), 0.0);
    assert_eq!(v["checks"]["lower_holds"], true);
    assert_eq!(v["checks"]["upper_holds"], true);

    let rows = ComplexMatrix::from_real(2, 2, &[0.9, 0.1, 0.3, 0.7]).unwrap();
    let path = write_matrix(&dir, "rows.json", &rows);
    let o = run(&["classical", "--input", p(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row-stochastic"));
    let o = run(&["classical", "--input", p(&id), "--prob", "0.5,0.6,0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_default_suite() {
    let o = run(&["verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn bad_alpha_is_input_error() {
    assert_eq!(run(&["sweep", "--family", "rotation", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--n", "1"]).status.code(), Some(2));
}
