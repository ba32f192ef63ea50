use std::process::Command;

use harmonic_na::cli::{parse_grid, run};

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("harmonic-na").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("harmonic-na-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, err) = run_args(&["htype", "--colour", "red"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(run_args(&["no-such-command"]).0, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_harmonic-na");
    let ok = Command::new(bin).args(["htype", "--k", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["m"], 4);
    let bad = Command::new(bin).args(["htype", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let invalid = Command::new(bin).args(["htype", "--k", "5"]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(1));
}

#[test]
fn htype_summary_shape() {
    let (code, out, _) = run_args(&["htype", "--k", "1", "--b", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["k"].as_u64(), v["m"].as_u64(), v["n"].as_u64()), (Some(1), Some(2), Some(4)));
    assert_eq!(v["Q"].as_f64(), Some(2.0));
    assert_eq!(v["J"][0], serde_json::json!([[0.0, -1.0], [1.0, 0.0]]));
}

#[test]
fn group_operations() {
    let (code, out, _) = run_args(&["group", "multiply", "--p", "[1,0,0,0]", "--q", "[0,1,0,0]"]);
    assert_eq!(code, 0);
    let v: Vec<f64> = serde_json::from_str(&out).unwrap();
    assert_eq!(v.len(), 4);
    assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    assert!(v[2].abs() > 0.0);
    let (code, out, _) = run_args(&["group", "distance", "--p", "[0,0,0,1.5]"]);
    assert_eq!(code, 0);
    let d: f64 = serde_json::from_str(&out).unwrap();
    assert!((d - 1.5).abs() < 1e-12);
    assert_eq!(run_args(&["group", "inverse", "--p", "[1,2]"]).0, 1);
    assert_eq!(run_args(&["group", "inverse", "--p", "not json"]).0, 2);
}

#[test]
fn spherical_table_header_precision_and_determinism() {
    let args = ["spherical", "table", "--lambda-grid", "0,1.5", "--r-grid", "0.5:1:2"];
    let (code, a, _) = run_args(&args);
    assert_eq!(code, 0);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("lambda,r,re,im,delta_integral,delta_koornwinder"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first.len(), 6);
    // 17 significant digits: d.dddddddddddddddde±x
    assert_eq!(first[2].split('e').next().unwrap().len(), 18);
    let (_, b, _) = run_args(&args);
    assert_eq!(a, b);
}

#[test]
fn config_is_strict_and_flags_override_it() {
    let bad = temp_file("bad.json", r#"{"algebra": {"k": 1}, "unexpected": true}"#);
    assert_eq!(run_args(&["--config", bad.to_str().unwrap(), "htype"]).0, 2);
    let good = temp_file("good.json", r#"{"algebra": {"k": 3}, "output": {"format": "json"}}"#);
    let (_, out, _) = run_args(&["--config", good.to_str().unwrap(), "htype"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["k"], 3);
    let (_, out, _) = run_args(&["--config", good.to_str().unwrap(), "htype", "--k", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["k"], 2);
    let (code, out, _) = run_args(&["--config", good.to_str().unwrap(), "abel", "slice", "--lambda-grid", "0,2"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[1]["delta"].as_f64().unwrap() < 1e-8);
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join(format!("harmonic-na-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("slice.csv");
    let (code, out, _) = run_args(&["--output", path.to_str().unwrap(), "abel", "slice", "--bump", "0.5", "--lambda-grid", "0:4:3"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("lambda,ft_abel,spherical_ft,delta\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn meanvalue_asymptotics_rows() {
    let (code, out, err) = run_args(&["meanvalue", "asymptotics", "--nu", "2", "--lambda-min", "50", "--lambda-max", "60"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lambda,quadrature,leading,remainder_scaled\n"));
    assert!(out.lines().count() > 10);
    assert!(err.contains("fitted remainder exponent"));
}

#[test]
fn slowdecrease_check_targets() {
    let (code, out, _) = run_args(&["slowdecrease", "check", "--target", "phi", "--t", "1", "--xi-max", "60", "--witness", "0.5,0.1,1,1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["margin"].as_f64().unwrap() >= 0.0);

    let file = temp_file("target.json", r#"{"terms": [{"coef": [0.5, 0], "freq": [1, 0]}, {"coef": [0.5, 0], "freq": [-1, 0]}]}"#);
    let (code, out, _) = run_args(&[
        "slowdecrease", "check", "--target", "file", "--file", file.to_str().unwrap(), "--xi-max", "50",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["witness"]["a"].as_f64().unwrap() > 0.0);

    let (code, out, _) = run_args(&["slowdecrease", "check", "--target", "phi", "--xi-max", "60", "--witness", "0.5,10,1,0"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(run_args(&["slowdecrease", "check", "--target", "phi", "--witness", "1,2"]).0, 2);
    assert_eq!(run_args(&["slowdecrease", "check", "--target", "file"]).0, 2);
}

#[test]
fn verify_all_subset() {
    let (code, out, err) = run_args(&["verify-all", "--k", "1", "--b", "1", "--seed", "7", "--only", "1,2,3,6"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn grid_parsing() {
    assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
    assert_eq!(parse_grid("1, 2.5").unwrap(), vec![1.0, 2.5]);
    assert!(parse_grid("a:b:c").is_err());
    assert!(parse_grid("0:1:0").is_err());
}
