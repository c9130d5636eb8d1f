use std::process::{Command, Output};

use serde_json::Value;

fn qbrach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbrach"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qbrach(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn synthesize_u13s() {
    let v = json(&[
        "synthesize",
        "--target",
        "u13s",
        "--J",
        "1",
        "--format",
        "json",
    ]);
    assert!((f(&v, "T") - 1.224745).abs() < 1e-6);
    assert!(f(&v, "fidelity") >= 1.0 - 1e-9);
    assert_eq!(v["n_plus"], 2);
    assert_eq!(v["n_minus"], 1);
    assert_eq!(v["n_zero"], 1);
    assert_eq!(v["m"], 1);
    assert_eq!(v["f_minus"], 3);
}

#[test]
fn json_key_set_is_fixed() {
    let v = json(&["synthesize", "--format", "json"]);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut want = vec![
        "target",
        "n_plus",
        "n_minus",
        "n_zero",
        "m",
        "J",
        "T",
        "B0",
        "Bz",
        "Omega",
        "omega_energy",
        "fidelity",
        "global_phase",
        "f_minus",
    ];
    want.sort_unstable();
    assert_eq!(keys, want);
}

#[test]
fn cnot_time_scales_with_coupling() {
    let v = json(&[
        "synthesize",
        "--target",
        "cnot13",
        "--J",
        "2",
        "--format",
        "json",
    ]);
    assert!((f(&v, "T") - 0.612372).abs() < 1e-6);
    assert!(f(&v, "fidelity") >= 1.0 - 1e-9);
    let pm = json(&["synthesize", "--target", "cnotpm13", "--format", "json"]);
    let u = json(&["synthesize", "--target", "u13s", "--format", "json"]);
    for key in ["T", "B0"] {
        assert!((f(&pm, key) - f(&u, key)).abs() < 1e-10);
    }
    for key in ["Bz", "Omega"] {
        assert!((f(&pm, key).abs() - f(&u, key).abs()).abs() < 1e-10);
    }
}

#[test]
fn search_rows() {
    let v = json(&[
        "search", "--target", "u13s", "--n-max", "10", "--format", "json",
    ]);
    let rows = v["rows"].as_array().unwrap();
    let at3: Vec<_> = rows.iter().filter(|r| r["f_minus"] == 3).collect();
    assert_eq!(at3.len(), 1);
    assert_eq!(
        (&at3[0]["n_plus"], &at3[0]["n_minus"], &at3[0]["n_zero"]),
        (&2.into(), &1.into(), &1.into())
    );
    let out = qbrach(&["search", "--target", "u13s", "--n-max", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f_minus = 1 count: 0"));
    let v = json(&[
        "search", "--target", "cnot13", "--n-max", "10", "--format", "json",
    ]);
    let first = &v["rows"][0];
    assert_eq!(
        (
            first["n_plus"].as_u64(),
            first["n_minus"].as_u64(),
            first["n_zero"].as_u64()
        ),
        (Some(1), Some(2), Some(1))
    );
}

#[test]
fn verify_default_and_coarse() {
    let v = json(&["verify", "--format", "json"]);
    assert!(f(&v, "final_error") < 1e-6);
    assert!((f(&v, "fitted_order") - 2.0).abs() < 0.2);
    let out = qbrach(&["verify", "--steps", "64"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn sweep_m1_row() {
    let v = json(&["sweep", "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let r1 = rows.iter().find(|r| r["m"] == 1).unwrap();
    assert!((f(r1, "J_over_omega") - 0.31566).abs() < 1e-4);
    assert!((f(r1, "B_over_J") - 2.25853).abs() < 1e-4);
    let min = rows
        .iter()
        .map(|r| f(r, "B_over_J"))
        .fold(f64::INFINITY, f64::min);
    assert_eq!(min, f(r1, "B_over_J"));
    // ratios do not depend on J
    let v3 = json(&["sweep", "--J", "3", "--format", "json"]);
    assert_eq!(v["rows"], v3["rows"]);
}

#[test]
fn csv_has_header() {
    let out = qbrach(&["sweep", "--m-min", "0", "--m-max", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "m,J_over_omega,B0_over_J,Bz_over_J,Omega_over_J,B_over_J"
    );
    assert_eq!(lines.len(), 3);
}

#[test]
fn flow_modified_variant() {
    let v = json(&[
        "flow",
        "--seed",
        "7",
        "--variant",
        "modified",
        "--format",
        "json",
    ]);
    assert_eq!(v["passed"], true);
    for (k, d) in v["drift"].as_object().unwrap() {
        assert!(d.as_f64().unwrap() < 1e-8, "{k}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(qbrach(&["synthesize", "--J", "0"]).status.code(), Some(1));
    assert_eq!(qbrach(&["search", "--n-max", "0"]).status.code(), Some(1));
    assert_eq!(
        qbrach(&["synthesize", "--target", "swap"]).status.code(),
        Some(1)
    );
    assert_eq!(qbrach(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qbrach(&["--help"]).status.code(), Some(0));
}
