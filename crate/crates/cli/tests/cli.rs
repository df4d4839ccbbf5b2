//! End-to-end tests of the `suploc` binary: worked moment examples, both
//! recover input kinds, exit-code contract, sweep determinism, and the
//! moments -> recover round trip.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::tempdir;

fn suploc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suploc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn suploc_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_suploc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

const UNIFORM: &str =
    r#"{"intervals": [{"a": -1.0, "b": 1.0, "w": 1.0, "density": "uniform"}]}"#;
const MIX: &str = r#"{
    "intervals": [{"a": -1.0, "b": 1.0, "w": 0.95, "density": "uniform"}],
    "atoms": [{"x": 1.5, "w": 0.05}]
}"#;

#[test]
fn moments_match_hand_computed_values() {
    let dir = tempdir().unwrap();

    let uniform = dir.path().join("uniform.json");
    std::fs::write(&uniform, UNIFORM).unwrap();
    let out = stdout_json(&suploc(&["moments", uniform.to_str().unwrap(), "--degree", "1"]));
    let moments = out["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 3);
    assert_eq!(moments[0], 1.0);
    assert_eq!(moments[1], 0.0);
    assert!((moments[2].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);

    let point = dir.path().join("point.json");
    std::fs::write(&point, r#"{"atoms": [{"x": 0.5, "w": 1.0}]}"#).unwrap();
    let out = stdout_json(&suploc(&["moments", point.to_str().unwrap(), "--degree", "1"]));
    assert_eq!(out["moments"], serde_json::json!([1.0, 0.5, 0.25]));

    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, r#"{"atoms": [{"x": -1.0, "w": 0.5}, {"x": 1.0, "w": 0.5}]}"#)
        .unwrap();
    let out = stdout_json(&suploc(&["moments", pair.to_str().unwrap(), "--degree", "2"]));
    assert_eq!(out["moments"], serde_json::json!([1.0, 0.0, 1.0, 0.0, 1.0]));
}

#[test]
fn moments_read_the_spec_from_stdin() {
    let out = suploc_with_stdin(&["moments", "-", "--degree", "1"], UNIFORM);
    let json = stdout_json(&out);
    assert_eq!(json["moments"].as_array().unwrap().len(), 3);
}

#[test]
fn recover_flat_from_a_moment_file() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("pair-moments.json");
    std::fs::write(&file, r#"{"moments": [1, 0, 1, 0, 1]}"#).unwrap();

    let out = suploc(&["recover", file.to_str().unwrap(), "--degree", "3"]);
    let json = stdout_json(&out);
    assert_eq!(json["regime"], "flat");
    let atoms = json["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 2);
    assert!((atoms[0].as_f64().unwrap() + 1.0).abs() < 1e-10);
    assert!((atoms[1].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn recover_rejects_non_psd_moments_with_exit_2() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"moments": [1, 2, 1]}"#).unwrap();

    let out = suploc(&["recover", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("min eigenvalue"),
        "stderr should report the offending eigenvalue: {stderr}"
    );
}

#[test]
fn recover_rejects_malformed_json_with_exit_2() {
    let out = suploc_with_stdin(&["recover", "-"], "{not json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moments_then_recover_agrees_with_recovering_the_spec() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("mix.json");
    std::fs::write(&spec, MIX).unwrap();
    let moments = dir.path().join("mix-moments.json");

    // One degree past the working degree, so the moment backend has the
    // same P_{N+1} lookahead as the quadrature backend and the automatic
    // regime resolves identically.
    let out = suploc(&[
        "moments",
        spec.to_str().unwrap(),
        "--degree",
        "13",
        "--out",
        moments.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let common = ["--epsilon", "0.25", "--degree", "12"];
    let mut from_spec = vec!["recover", spec.to_str().unwrap()];
    from_spec.extend_from_slice(&common);
    let mut from_file = vec!["recover", moments.to_str().unwrap()];
    from_file.extend_from_slice(&common);

    let a = stdout_json(&suploc(&from_spec));
    let b = stdout_json(&suploc(&from_file));

    assert_eq!(a["regime"], b["regime"]);
    for key in ["atoms", "pollution"] {
        let xs = a[key].as_array().unwrap();
        let ys = b[key].as_array().unwrap();
        assert_eq!(xs.len(), ys.len(), "{key} length");
        for (x, y) in xs.iter().zip(ys) {
            let dx = (x.as_f64().unwrap() - y.as_f64().unwrap()).abs();
            assert!(dx <= 1e-6, "{key} coordinate differs by {dx}");
        }
    }
    let xs = a["intervals"].as_array().unwrap();
    let ys = b["intervals"].as_array().unwrap();
    assert_eq!(xs.len(), ys.len(), "interval count");
    for (x, y) in xs.iter().zip(ys) {
        for side in 0..2 {
            let dx = (x[side].as_f64().unwrap() - y[side].as_f64().unwrap()).abs();
            assert!(dx <= 1e-6, "interval endpoint differs by {dx}");
        }
    }
}

#[test]
fn strict_mode_escalates_warnings_but_still_writes_the_estimate() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("uniform.json");
    std::fs::write(&spec, UNIFORM).unwrap();
    let est = dir.path().join("estimate.json");

    // Degree 5 roots of the uniform measure are ~0.3 apart: nothing
    // clusters at epsilon 1e-2, so the run warns LowDegree.
    let out = suploc(&[
        "recover",
        spec.to_str().unwrap(),
        "--degree",
        "5",
        "--regime",
        "single",
        "--strict",
        "--out",
        est.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("LowDegree"), "stderr: {stderr}");

    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&est).unwrap()).unwrap();
    assert_eq!(written["degree"], 5);

    // Without --strict the same run exits 0.
    let out = suploc(&[
        "recover",
        spec.to_str().unwrap(),
        "--degree",
        "5",
        "--regime",
        "single",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn consistency_check_passes_quietly_on_a_stable_spec() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("mix.json");
    std::fs::write(&spec, MIX).unwrap();

    let out = suploc(&[
        "recover",
        spec.to_str().unwrap(),
        "--degree",
        "40",
        "--regime",
        "single",
        "--check-consistency",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0), "stable estimate should not warn");
}

#[test]
fn sweep_is_deterministic_and_feeds_report() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    // Degree 10 stays below the clustering threshold at this epsilon
    // (LowDegree, no success); degree 12 resolves the interval and the
    // atom, so the aggregated minimal successful degree is 12. The tiny
    // noise routes the cells through the seeded moment backend.
    std::fs::write(
        &config,
        r#"{
            "scenario": "one_interval",
            "a": [1.0],
            "c": [0.0],
            "r": [1.0],
            "degrees": [10, 12],
            "epsilon": 0.12,
            "noise_sigma": 1e-12,
            "seed": 7
        }"#,
    )
    .unwrap();

    let first = suploc(&["sweep", config.to_str().unwrap()]);
    assert!(first.status.success());
    let second = suploc(&["sweep", config.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "sweep CSV must be byte-identical");

    let csv = String::from_utf8(first.stdout).unwrap();
    assert_eq!(csv.lines().count(), 3, "header plus one row per degree");
    let success_flags: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(6).unwrap())
        .collect();
    assert_eq!(success_flags, ["false", "true"]);

    let report = suploc_with_stdin(&["report", "-"], &csv);
    let json = stdout_json(&report);
    let entries = json.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["a"], 1.0);
    assert_eq!(entries[0]["r"], 1.0);
    assert_eq!(entries[0]["min_degree"], 12);
}

#[test]
fn sweep_rejects_an_invalid_config_with_exit_2() {
    let out = suploc_with_stdin(
        &["sweep", "-"],
        r#"{"scenario": "one_interval", "epsilon": -1.0}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}
