use std::path::Path;
use std::process::{Command, Output};

use carleson_lab::report::{read_csv_rows, read_report, Status};
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carleson-lab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "alpha = 1\nsymbol = \"monomial:2\"\n");
    let out = lab(&["scaling", "--config", &cfg, "--alpha", "0", "--samples", "200000", "--h-count", "2"]);
    let r = json(&out);
    assert_eq!(r["config"]["alpha"].as_f64(), Some(0.0));
    assert_eq!(r["config"]["symbol"], "monomial:2");
}

#[test]
fn bad_symbol_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "symbol = \"blaschke:1.5\"\n");
    let out = lab(&["scaling", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["kind"], "unknown-symbol");
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "alpha = 0\nsamples = \"many\"\n");
    let out = lab(&["remark", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["error"]["line"].as_u64(), Some(2));
    assert_eq!(r["error"]["key"], "samples");
}

#[test]
fn empty_config_echoes_the_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "");
    let r = json(&lab(&["remark", "--config", &cfg]));
    let c = &r["config"];
    assert_eq!(c["seed"].as_u64(), Some(20240601));
    assert_eq!(c["symbol"], "identity");
    assert_eq!(c["n_max"].as_u64(), Some(12));
    assert_eq!(c["orlicz"], "power:2");
}

#[test]
fn remark_command() {
    let out = lab(&["remark"]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.status, Status::Ok);
    let p = &r.payload;
    let d = p["tau_prime_fd"].as_f64().unwrap();
    assert!((d + 1.0 / 60.0).abs() < 0.05 / 60.0, "{d}");
    assert!(p["witness"].as_f64().is_some_and(|t| t <= 0.5));
}

#[test]
fn scaling_command_is_exact_at_eps_one() {
    let out = lab(&["scaling", "--symbol", "identity", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let eps: Vec<f64> = r["payload"]["eps"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let last = eps.len() - 1;
    assert_eq!(eps[last], 1.0);
    for row in r["payload"]["ratio"].as_array().unwrap() {
        assert_eq!(row[last].as_f64(), Some(1.0));
    }
}

#[test]
fn compact_command_on_the_identity() {
    let out = lab(&["compact", "--symbol", "identity", "--orlicz", "power:2", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["verdict"], "NotCompactIndicated");
}

#[test]
fn violations_exit_with_two() {
    let out = lab(&["czd", "--symbol", "affine:0.3,0 o reciprocal", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    // An alarm threshold below 1 flags every ratio.
    let out = lab(&["scaling", "--alarm", "0.5", "--samples", "200000"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "violation");
}

#[test]
fn same_seed_same_bytes() {
    let args = ["selftest", "--seed", "7"];
    let (a, b) = (json(&lab(&args)), json(&lab(&args)));
    assert_eq!(a["determinism_hash"], b["determinism_hash"]);
    let strip = |mut v: Value| {
        v["timestamp"] = Value::Null;
        serde_json::to_vec(&v).unwrap()
    };
    assert_eq!(strip(a.clone()), strip(b));
    let c = json(&lab(&["selftest", "--seed", "8"]));
    assert_ne!(a["determinism_hash"], c["determinism_hash"]);
}

#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json").to_string_lossy().into_owned();
    let out = lab(&["czd", "--symbol", "affine:0.3,0 o reciprocal", "--out", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let r = read_report(&text).unwrap();
    assert!(r.verify_hash().unwrap());
    assert_eq!(r.to_json().unwrap(), text.as_bytes());

    let out = lab(&["remark", "--format", "csv"]);
    let rows = read_csv_rows(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let get = |k: &str| rows.iter().find(|(p, _)| p == k).map(|(_, v)| v.clone());
    assert_eq!(get("status").as_deref(), Some("ok"));
    let json_report = json(&lab(&["remark"]));
    let d: f64 = get("payload.tau_prime_fd").unwrap().parse().unwrap();
    assert_eq!(d, json_report["payload"]["tau_prime_fd"].as_f64().unwrap());
}
