use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn qspeed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspeed"))
        .args(args)
        .env_remove("QSPEED_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn diag(entries: &[f64]) -> String {
    let n = entries.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n)
                .map(|j| format!("[{}, 0]", if i == j { entries[i] } else { 0.0 }))
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("{{\"dim\": {n}, \"entries\": [{}]}}", rows.join(", "))
}

fn plus_sz(dir: &TempDir) -> String {
    let body = format!(
        r#"{{"type": "family", "kind": "unitary", "hamiltonian": {}, "state": {{"amplitudes": [[{R}, 0], [{R}, 0]]}}}}"#,
        diag(&[0.5, -0.5])
    );
    write(dir, "plus_sz.json", &body)
}

fn ghz3_jz(dir: &TempDir) -> String {
    let jz: Vec<f64> = (0..8u32).map(|b| 1.5 - b.count_ones() as f64).collect();
    let mut amps = vec!["[0, 0]".to_string(); 8];
    amps[0] = format!("[{R}, 0]");
    amps[7] = format!("[{R}, 0]");
    let body = format!(
        r#"{{"type": "family", "kind": "unitary", "hamiltonian": {}, "state": {{"amplitudes": [{}]}}}}"#,
        diag(&jz),
        amps.join(", ")
    );
    write(dir, "ghz3_jz.json", &body)
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn speed_of_plus_state() {
    let dir = TempDir::new().unwrap();
    let fam = plus_sz(&dir);
    let v = json_out(&qspeed(&["speed", "--family", &fam, "--alpha", "1", "--theta", "0"]));
    assert_eq!(v["report"], "speed");
    assert!((num(&v, "F1") - 1.0).abs() < 1e-12);
    // pure state: F2 = 4 Var(σ_z/2) = 1
    assert!((num(&v, "F2") - 1.0).abs() < 1e-12);
    assert!((num(&v, "S_bures") - (1.0f64 / 8.0).sqrt()).abs() < 1e-12);
    assert_eq!(v["F_alpha_estimate"], false);
}

#[test]
fn speed_with_povm() {
    let dir = TempDir::new().unwrap();
    let fam = plus_sz(&dir);
    let v = json_out(&qspeed(&["speed", "--family", &fam, "--povm", "--povm-target", "qfi"]));
    let elements = v["povm"].as_array().unwrap();
    assert!(!elements.is_empty());
    assert_eq!(elements[0]["dim"], 2);
}

#[test]
fn identical_states_have_zero_distance() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &format!(r#"{{"type": "density", {}"#, &diag(&[0.3, 0.7])[1..]));
    let v = json_out(&qspeed(&["distance", "--rho", &a, "--sigma", &a, "--alpha", "2"]));
    for k in ["D1", "D2", "schatten_D_alpha"] {
        assert!(num(&v, k).abs() < 1e-7, "{k}: {v}");
    }
    assert!((num(&v, "fidelity") - 1.0).abs() < 1e-12);
}

#[test]
fn ghz_witness() {
    let dir = TempDir::new().unwrap();
    let fam = ghz3_jz(&dir);
    let v = json_out(&qspeed(&["witness", "--family", &fam, "--bound", "ksep", "--k", "1", "--alpha", "1"]));
    assert_eq!(v["verdict"], "entangled");
    assert!((num(&v, "speed") - 3.0).abs() < 1e-10);
    assert!((num(&v, "bound") - 3f64.sqrt()).abs() < 1e-10);
}

#[test]
fn heisenberg_bound() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", &format!(r#"{{"type": "hermitian", {}"#, &diag(&[1.0, -2.0, 0.5])[1..]));
    let v = json_out(&qspeed(&["bound", "--kind", "heisenberg", "--hamiltonian", &h]));
    assert!((num(&v, "F1") - 3.0).abs() < 1e-12);
    assert!((num(&v, "F2") - 9.0).abs() < 1e-12);
}

#[test]
fn oracle_reports_discrepancy() {
    let dir = TempDir::new().unwrap();
    let fam = plus_sz(&dir);
    let v = json_out(&qspeed(&["oracle", "--family", &fam, "--alpha", "2", "--restarts", "4"]));
    assert!((num(&v, "closed_form") - 1.0).abs() < 1e-12);
    assert!(num(&v, "discrepancy") < 1e-6);
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &format!(r#"{{"type": "density", {}"#, &diag(&[0.5, 0.5])[1..]));
    let o = qspeed(&["validate", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["diagnostics"].as_array().unwrap().len(), 0);

    let short = write(&dir, "short.json", &format!(r#"{{"type": "density", {}"#, &diag(&[0.5, 0.4])[1..]));
    let o = qspeed(&["validate", &short]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["diagnostics"][0]["message"], "trace deviation 0.1");

    let skew = write(
        &dir,
        "skew.json",
        r#"{"type": "hermitian", "dim": 2, "entries": [[[1, 0], [0.5, 0]], [[0, 0], [1, 0]]]}"#,
    );
    let o = qspeed(&["validate", &skew]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let msg = v["diagnostics"][0]["message"].as_str().unwrap();
    assert!(msg.contains("(0, 1)"), "{msg}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"type\": \"family\",\n \"kind\": }");
    let o = qspeed(&["speed", "--family", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = qspeed(&["speed", "--family", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qspeed(&["speed"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_validate_and_repeat_exactly() {
    let dir = TempDir::new().unwrap();
    let args = ["--seed", "7", "estimate", "--task", "median", "--model", "laplace", "--m", "11", "--trials", "400"];
    let a = qspeed(&args);
    let b = qspeed(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let report = write(&dir, "report.json", std::str::from_utf8(&a.stdout).unwrap());
    assert_eq!(qspeed(&["validate", &report]).status.code(), Some(0));
}

#[test]
fn seed_from_environment() {
    let args = ["estimate", "--task", "cramer_rao", "--estimator", "mean", "--m", "5", "--trials", "1000"];
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qspeed")).args(args).env("QSPEED_SEED", seed).output().unwrap()
    };
    let flag = qspeed(&["--seed", "3", "estimate", "--task", "cramer_rao", "--estimator", "mean", "--m", "5", "--trials", "1000"]);
    assert!(flag.status.success(), "{}", String::from_utf8_lossy(&flag.stderr));
    assert_eq!(run("3").stdout, flag.stdout);
    assert_ne!(run("4").stdout, flag.stdout);
}

#[test]
fn csv_output() {
    let dir = TempDir::new().unwrap();
    let fam = plus_sz(&dir);
    let o = qspeed(&["--format", "csv", "speed", "--family", &fam]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "F1").unwrap();
    assert_eq!(row[i], "1.0");
    assert!(Path::new(&fam).exists());
}
