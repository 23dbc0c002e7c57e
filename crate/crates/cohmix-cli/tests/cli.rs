//! End-to-end tests of the `cohmix` binary: exit-code contract, file
//! round-trips through the library's own readers, and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cohmix::sampler::read_scan_csv;
use cohmix::transforms::TransformPlan;
use cohmix::DensityMatrix;

fn cohmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohmix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_state(path: &Path, json: &str) {
    fs::write(path, json).unwrap();
}

#[test]
fn measure_reports_the_reference_family_values() {
    let dir = tempfile::tempdir().unwrap();
    let state_path = dir.path().join("state.json");

    let gen = cohmix(&[
        "mcms",
        "--dim",
        "3",
        "--p",
        "0.5",
        "--out",
        state_path.to_str().unwrap(),
    ]);
    assert!(gen.status.success(), "{}", stderr_of(&gen));

    let out = cohmix(&["measure", "--state", state_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["dim"], 3);
    assert!((report["c_l1"].as_f64().unwrap() - 1.0).abs() < 1e-11);
    assert!((report["m_linear"].as_f64().unwrap() - 0.75).abs() < 1e-11);
    assert!(report["tradeoff_residual"].as_f64().unwrap().abs() < 1e-9);
    // No closed form above d = 2, and the numeric route was not requested.
    assert!(report.get("c_geometric").is_none());
}

#[test]
fn measure_of_the_maximally_mixed_state() {
    let dir = tempfile::tempdir().unwrap();
    let state_path = dir.path().join("mixed.json");
    write_state(
        &state_path,
        r#"{"dim":2,"entries":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#,
    );
    let out = cohmix(&["measure", "--state", state_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["c_l1"].as_f64().unwrap(), 0.0);
    assert!((report["m_linear"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mcms_at_unit_p_is_the_uniform_projector() {
    let out = cohmix(&["mcms", "--dim", "2", "--p", "1"]);
    assert!(out.status.success());
    let state = DensityMatrix::from_json_str(&stdout_of(&out)).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((state.entry(i, j).re - 0.5).abs() < 1e-12);
            assert_eq!(state.entry(i, j).im, 0.0);
        }
    }
}

#[test]
fn measure_includes_geometric_coherence_for_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let state_path = dir.path().join("qubit.json");
    write_state(
        &state_path,
        r#"{"dim":2,"entries":[[[0.5,0],[0.3,0]],[[0.3,0],[0.5,0]]]}"#,
    );
    let out = cohmix(&["measure", "--state", state_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let expected = (1.0 - (1.0_f64 - 4.0 * 0.09).sqrt()) / 2.0;
    assert!((report["c_geometric"].as_f64().unwrap() - expected).abs() < 1e-11);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();

    // 1: validation — non-PSD input, named in the message.
    let bad = dir.path().join("bad.json");
    write_state(
        &bad,
        r#"{"dim":2,"entries":[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#,
    );
    let out = cohmix(&["measure", "--state", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("NotPSD"));

    // 1: validation — parameter out of range.
    let out = cohmix(&["mcms", "--dim", "2", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("ParamOutOfRange"));

    // 1: validation — degenerate transform parameters.
    let out = cohmix(&[
        "transform",
        "fixed-coherence",
        "--a1",
        "0.5",
        "--a2",
        "0.3",
        "--alpha",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("Degenerate"));

    // 1: validation — usage errors map to 1, not clap's default 2.
    let out = cohmix(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    // 3: I/O — unreadable input.
    let out = cohmix(&["measure", "--state", "/definitely/missing.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("Io"));

    // 3: I/O — unwritable output.
    let out = cohmix(&[
        "scan",
        "--dim",
        "2",
        "--n",
        "5",
        "--out",
        "/definitely/missing/points.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 0: success and help.
    let out = cohmix(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scan_artifacts_round_trip_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let points_path = dir.path().join("cloud.csv");

    let run = |path: &Path| {
        let out = cohmix(&[
            "scan",
            "--dim",
            "2",
            "--n",
            "300",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr_of(&out));
        stdout_of(&out)
    };
    let summary = run(&points_path);
    let summary: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(summary["samples"], 300);
    assert_eq!(summary["max_violation"], 0.0);

    // The CSV parses with the library reader and respects the bound.
    let text = fs::read_to_string(&points_path).unwrap();
    let points = read_scan_csv(text.as_bytes()).unwrap();
    assert_eq!(points.len(), 300);
    for p in &points {
        assert!(p.scaled_coherence <= (1.0 - p.mixedness).sqrt() + 1e-9);
    }
    let curve = fs::read_to_string(dir.path().join("cloud_parabola.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1002);

    // Same seed, same bytes.
    let second_path = dir.path().join("again.csv");
    run(&second_path);
    assert_eq!(text, fs::read_to_string(&second_path).unwrap());
}

#[test]
fn single_sample_scan_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let out = cohmix(&[
        "scan", "--dim", "3", "--n", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
}

#[test]
fn mcms_solves_for_p_from_mixedness() {
    // m = 0.19 inverts to p = 0.9.
    let out = cohmix(&["mcms", "--dim", "4", "--mixedness", "0.19"]);
    assert!(out.status.success());
    let state = DensityMatrix::from_json_str(&stdout_of(&out)).unwrap();
    // Off-diagonal entries of the family are p/d.
    assert!((state.entry(0, 1).re - 0.9 / 4.0).abs() < 1e-11);
    assert!((state.entry(0, 0).re - 0.25).abs() < 1e-11);
}

#[test]
fn verify_defaults_pass() {
    let out = cohmix(&["verify", "--n", "50"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let verdict: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(verdict["pass"], true);
    let checks = verdict["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "mcms_grid"));
    assert!(checks.iter().any(|c| c["name"] == "qubit_identity"));
    assert!(checks.iter().any(|c| c["name"] == "geometric_complementarity"));
    for check in checks {
        assert_eq!(check["pass"], true, "{check}");
    }
}

#[test]
fn verify_qubit_identity_selector() {
    let out = cohmix(&["verify", "--dim", "2", "--qubit-identity", "--n", "500"]);
    assert!(out.status.success());
    let verdict: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let checks = verdict["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "qubit_identity");
    assert!(checks[0]["worst"].as_f64().unwrap() <= 1e-12);

    // The selector needs a qubit dimension.
    let out = cohmix(&["verify", "--dim", "3", "--qubit-identity"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_optimizer_cross_check() {
    let out = cohmix(&[
        "verify",
        "--optimize",
        "--dim",
        "3",
        "--mixedness",
        "0.75",
        "--n",
        "20",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let verdict: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let opt = &verdict["optimizer"][0];
    assert_eq!(opt["converged"], true);
    assert!((opt["objective"].as_f64().unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn transform_plans_round_trip_through_the_library_reader() {
    let out = cohmix(&[
        "transform",
        "fixed-coherence",
        "--a1",
        "0.3",
        "--a2",
        "0.4",
        "--alpha",
        "0.4",
    ]);
    assert!(out.status.success());
    let plan = TransformPlan::from_json_str(&stdout_of(&out)).unwrap();
    assert!((plan.components[0].weight - 0.75).abs() < 1e-11);
    assert!(plan.residual <= 1e-12);
}

#[test]
fn transform_similarity_on_files_with_apply() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("r1.json");
    let p2 = dir.path().join("r2.json");
    write_state(&p1, r#"{"dim":2,"entries":[[[0.3,0],[0.4,0]],[[0.4,0],[0.7,0]]]}"#);
    write_state(&p2, r#"{"dim":2,"entries":[[[0.9,0],[0.2,0]],[[0.2,0],[0.1,0]]]}"#);

    let out = cohmix(&[
        "transform",
        "fixed-mixedness",
        "--state1",
        p1.to_str().unwrap(),
        "--state2",
        p2.to_str().unwrap(),
        "--apply",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let payload: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let plan = TransformPlan::from_json_str(&payload["plan"].to_string()).unwrap();
    assert!(plan.residual <= 1e-12);
    let applied = DensityMatrix::from_json_str(&payload["applied_state"].to_string()).unwrap();
    assert!((applied.entry(0, 0).re - 0.9).abs() < 1e-11);

    // Mismatched spectra are a validation error.
    let p3 = dir.path().join("pure.json");
    write_state(&p3, r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#);
    let out = cohmix(&[
        "transform",
        "fixed-mixedness",
        "--state1",
        p1.to_str().unwrap(),
        "--state2",
        p3.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("SpectraMismatch"));
}
