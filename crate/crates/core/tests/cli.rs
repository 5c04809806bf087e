use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qmengine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmengine")).args(args).output().unwrap()
}

fn json_cycle(args: &[&str]) -> Value {
    let mut full = vec!["cycle"];
    full.extend_from_slice(args);
    let out = qmengine(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn uncoupled_cycle_efficiency() {
    let v = json_cycle(&["--spin-a", "1/2", "--spin-b", "1/2", "--j", "0", "--b1", "3", "--b2", "4", "--meas-a", "x", "--meas-b", "z"]);
    assert!((num(&v, "eta") - 0.25).abs() < 1e-12);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["transition"].as_array().unwrap().len(), 4);
}

#[test]
fn dephasing_only_cycle_does_no_work() {
    let v = json_cycle(&["--j", "0.5", "--b1", "3", "--b2", "4", "--meas-a", "z", "--meas-b", "z"]);
    assert!(num(&v, "wt").abs() < 1e-12);
    assert!(num(&v, "eta").abs() < 1e-12);
    let v = json_cycle(&["--j", "0", "--b1", "3", "--b2", "4", "--meas-a", "z", "--meas-b", "z"]);
    assert!(v["eta"].is_null());
    assert_eq!(v["status"], "eta_undefined");
}

#[test]
fn equal_fields_give_no_work() {
    let v = json_cycle(&["--spin-b", "1", "--j", "0.7", "--b1", "3", "--b2", "3"]);
    for key in ["w1", "w2", "wt"] {
        assert!(num(&v, key).abs() < 1e-12, "{key}");
    }
}

#[test]
fn optional_analyses() {
    let v = json_cycle(&[
        "--spin-b", "1", "--j", "0.8", "--b1", "3", "--b2", "4", "--local-works", "--t2", "--cop", "--decomposition",
    ]);
    assert!(num(&v, "w_local_b").abs() < 1e-12);
    assert!(num(&v, "cop") > 0.0);
    assert!(v["t2_effective"].is_null());
    assert_eq!(v["status"], "t2_not_found");
    let total = num(&v["decomposition"], "total");
    assert!((total + num(&v, "wt")).abs() < 1e-10);
}

#[test]
fn csv_cycle_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let out = qmengine(&["cycle", "--j", "0.2", "--b1", "3", "--b2", "4", "--meas-a", "theta=0.5,phi=1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("spin_a,spin_b,j,b1,b2,kbt,meas_a,meas_b,theta_a"));
    assert!(lines[1].contains("\"theta=0.5,phi=1\""));
    assert!(lines[1].contains(",5.00000000000000e-1,1.00000000000000e0,"));
}

#[test]
fn usage_and_computation_errors() {
    let out = qmengine(&["cycle", "--j", "0.5", "--b1", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--b2"));
    let out = qmengine(&["cycle", "--j", "0.5", "--b1", "3", "--b2", "4", "--meas-a", "q"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmengine(&["cycle", "--spin-a", "1", "--meas-a", "sic", "--j", "0.5", "--b1", "3", "--b2", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SIC"));
    let out = qmengine(&["cycle", "--j", "0.5", "--b1", "3", "--b2", "4", "--kbt", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

fn write_config(dir: &Path, name: &str, spin_b: &str, j: &str) -> String {
    let path = dir.join(name);
    let text = format!(
        r#"{{"spin_a": "1/2", "spin_b": "{spin_b}", "j_values": {j},
            "b1_values": [3], "b2_values": [4], "scheme": {{"a": "x", "b": "z"}},
            "outputs": {{"cop": true, "local_works": true}}}}"#
    );
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn sweep_rows(config: &str, out: &Path, threads: &str) -> Vec<Vec<String>> {
    let status = qmengine(&["sweep", "--config", config, "--out", out.to_str().unwrap(), "--threads", threads]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let mut reader = csv::Reader::from_path(out).unwrap();
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn sweep_is_deterministic_and_reproduces_the_efficiency_curves() {
    let dir = tempfile::tempdir().unwrap();
    let range = r#"{"start": 0, "stop": 1, "count": 101}"#;
    let half = write_config(dir.path(), "half.json", "1/2", range);
    let one = dir.path().join("one.csv");
    let many = dir.path().join("many.csv");
    let rows = sweep_rows(&half, &one, "1");
    sweep_rows(&half, &many, "4");
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&many).unwrap());
    assert_eq!(rows.len(), 101);
    let eta = |rows: &[Vec<String>], k: usize| rows[k][17].parse::<f64>().unwrap();
    let best = (1..101).map(|k| eta(&rows, k)).fold(f64::MIN, f64::max);
    assert!(best > 0.25);

    let mixed = write_config(dir.path(), "mixed.json", "1", range);
    let rows = sweep_rows(&mixed, &dir.path().join("mixed.csv"), "2");
    let cross = (1..101).find(|&k| eta(&rows, k - 1) > 0.0 && eta(&rows, k) <= 0.0).unwrap();
    let j = rows[cross][2].parse::<f64>().unwrap();
    assert!((j - 0.59).abs() <= 0.011, "sign change at {j}");
}

#[test]
fn malformed_sweep_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let empty = write_config(dir.path(), "empty.json", "1/2", "[]");
    let res = qmengine(&["sweep", "--config", &empty, "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("j_values"));
    assert!(!out.exists());
    let res = qmengine(&["sweep", "--config", "/nonexistent/config.json", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn validate_command() {
    let out = qmengine(&["validate", "--group", "tables"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] tables: 6/6"));
    let out = qmengine(&["validate", "--group", "tables,closed-forms", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qmengine(&["validate", "--group", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
