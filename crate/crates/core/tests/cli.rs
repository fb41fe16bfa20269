use std::process::Command;

use serde_json::Value;
use teleclone::cli::SWEEP_HEADER;

fn teleclone(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_teleclone"))
        .args(args)
        .env_remove("TELECLONE_M_CAP")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = teleclone(args);
    assert_eq!(code, 0, "{args:?} failed: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn run_two_copies_of_zero() {
    let v = json(&["run", "--m", "2", "--input", "1,0,0,0", "--outcome", "phi+"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["m", "input", "outcome", "probability", "clone_fidelity_theory", "clone_fidelities", "max_abs_error", "seed"] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert_eq!(v["outcome"], "phi+");
    for f in floats(&v["clone_fidelities"]) {
        assert!((f - 5.0 / 6.0).abs() < 1e-12);
    }
    assert!((v["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn run_teleportation_limit() {
    let v = json(&["run", "--m", "1", "--input", "random", "--seed", "7", "--outcome", "sample"]);
    let f = floats(&v["clone_fidelities"]);
    assert_eq!(f.len(), 1);
    assert!((f[0] - 1.0).abs() < 1e-10);
}

#[test]
fn run_is_byte_deterministic() {
    let args = ["run", "--m", "3", "--input", "random", "--seed", "7", "--outcome", "sample"];
    assert_eq!(teleclone(&args).1, teleclone(&args).1);
    let args = ["secret-share", "--m", "2", "--seed", "5"];
    assert_eq!(teleclone(&args).1, teleclone(&args).1);
}

#[test]
fn run_with_receiver_port() {
    let v = json(&["run", "--m", "2", "--port", "C2", "--outcome", "psi-", "--correct-ancilla", "false"]);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn analyze_reports() {
    let v = json(&["analyze", "--m", "3"]);
    assert!((v["total_entanglement_bits"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!(v["pair_class_opposite"]["theoretical"]["re"].is_array());
    assert!(v["pair_class_opposite"]["matrix"]["re"].is_array());
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-12);

    let v = json(&["analyze", "--m", "2"]);
    assert!((v["min_pt_eigenvalue_opposite"].as_f64().unwrap() + 0.25).abs() < 1e-12);

    let v = json(&["analyze", "--m", "5"]);
    assert_eq!(v["pair_class_same"]["entangled"], false);
    assert_eq!(v["pair_class_opposite"]["entangled"], true);
}

#[test]
fn sweep_csv() {
    let (code, stdout, stderr) = teleclone(&["sweep", "--m-max", "4"]);
    assert_eq!(code, 0, "{stderr}");
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 4);
    let num = |r: &[String], k: usize| r[k].parse::<f64>().unwrap();
    assert_eq!(rows[0][0], "1");
    assert_eq!(num(&rows[0], 1), 1.0);
    for k in 6..=8 {
        assert_eq!(num(&rows[0], k), 1.0);
    }
    assert_eq!(num(&rows[3], 1), 0.75);
    assert!((num(&rows[3], 6) - 5f64.log2()).abs() < 1e-11);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 9);
        assert_eq!(row[0], (i + 1).to_string());
        assert!(num(row, 2) < 1e-9);
    }
    assert_eq!(rows[0][5], "nan");
}

#[test]
fn sweep_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("teleclone-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    let (code, stdout, _) = teleclone(&["sweep", "--m-max", "2", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn secret_share_round_trips() {
    for args in [
        vec!["secret-share", "--m", "2", "--input", "random", "--seed", "3"],
        vec!["secret-share", "--m", "4", "--outcome", "psi-"],
        vec!["secret-share", "--m", "1"],
        vec!["secret-share", "--m", "3", "--correct-ancilla", "false", "--outcome", "phi-"],
    ] {
        let v = json(&args);
        assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9, "{args:?}");
    }
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        vec!["run", "--m", "0"],
        vec!["run", "--m", "13"],
        vec!["run", "--input", "1,0,1,0"],
        vec!["run", "--input", "1,2"],
        vec!["run", "--outcome", "maybe"],
        vec!["run", "--port", "C9"],
        vec!["analyze", "--m", "1"],
        vec!["sweep", "--m-max", "0"],
        vec!["run", "--format", "csv"],
        vec!["frobnicate"],
    ] {
        let (code, _, _) = teleclone(&args);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn cap_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_teleclone"))
        .args(["run", "--m", "3"])
        .env("TELECLONE_M_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
