//! End-to-end contract of the `convchar` binary: exit codes (0 clean,
//! 1 violation with report written, 2 usage or I/O error), report shapes,
//! and the CSV table of the study subcommand.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use convchar::io::save_theta;
use convchar::{OperatorKind, ThetaAssignment, ThetaTarget};

fn convchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convchar"))
        .args(args)
        .output()
        .expect("run convchar")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("read report");
    serde_json::from_str(&text).expect("valid JSON report")
}

#[test]
fn verify_identities_passes_and_reports_each_identity() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("identities.json");
    let run = convchar(&[
        "verify-identities",
        "--group",
        "4x3",
        "--trials",
        "15",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report = read_json(&out);
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["group"], "4x3");
    for key in [
        "cosine_convolution_theorem",
        "dalembert_lemma",
        "fourier_convolution_theorem",
        "shift_lemma",
    ] {
        let residual = report["identities"][key].as_f64().unwrap_or_else(|| {
            panic!("identity {key} missing from report");
        });
        assert!(residual <= 1e-8, "{key}: residual {residual}");
    }
    // Associativity of the cosine convolution is reported but never gated.
    assert!(report["informational"]["cosine_convolution_associativity"].is_f64());
}

#[test]
fn zero_operator_extracts_to_all_annihilated_rows() {
    let dir = TempDir::new().unwrap();
    let op = dir.path().join("zero.json");
    let rep = dir.path().join("report.json");
    let made = convchar(&[
        "make-operator",
        "--kind",
        "fourier",
        "--group",
        "6",
        "--theta",
        "zero",
        "--out",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&made), 0, "stderr: {}", stderr(&made));

    let run = convchar(&[
        "extract",
        "--kind",
        "fourier",
        "--operator",
        op.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report = read_json(&rep);
    assert!(report["error"].is_null());
    let targets = report["theta"].as_array().expect("theta array");
    assert_eq!(targets.len(), 6);
    for target in targets {
        assert_eq!(target["type"], "annihilated");
    }
}

#[test]
fn perturbed_operator_exits_one_and_still_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let op = dir.path().join("perturbed.json");
    let rep = dir.path().join("report.json");
    let made = convchar(&[
        "make-operator",
        "--kind",
        "cosine",
        "--group",
        "8",
        "--theta",
        "random",
        "--seed",
        "5",
        "--perturb",
        "0.1",
        "--out",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&made), 0, "stderr: {}", stderr(&made));

    let run = convchar(&[
        "extract",
        "--kind",
        "cosine",
        "--operator",
        op.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 1, "stderr: {}", stderr(&run));
    let report = read_json(&rep);
    assert_eq!(report["error"]["code"], "not_multiplicative");
    assert!(report["theta"].is_null());
    assert!(report["rows"]
        .as_array()
        .is_some_and(|rows| !rows.is_empty()));
}

#[test]
fn roundtrip_recovers_the_planted_map() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("roundtrip.json");
    let run = convchar(&[
        "roundtrip",
        "--group",
        "7",
        "--kind",
        "fourier",
        "--seed",
        "3",
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report = read_json(&rep);
    assert_eq!(report["recovered_matches_planted"], Value::Bool(true));
    assert_eq!(report["planted"], report["extraction"]["theta"]);
    assert!(report["factorization_residual"].as_f64().unwrap() <= 1e-10);
    assert!(report["witness"]["max_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn laplace_roundtrip_recovers_planted_exponents() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("roundtrip.json");
    let run = convchar(&[
        "roundtrip",
        "--kind",
        "laplace",
        "--seed",
        "11",
        "--h",
        "0.02",
        "--X",
        "8",
        "--y-grid",
        "0.5:2.0:4",
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report = read_json(&rep);
    assert_eq!(report["recovered_matches_planted"], Value::Bool(true));
    assert!(report["extraction"]["error"].is_null());
}

#[test]
fn theta_file_drives_make_operator() {
    let dir = TempDir::new().unwrap();
    let theta_path = dir.path().join("theta.json");
    let op = dir.path().join("op.json");
    let rep = dir.path().join("report.json");

    // A hand-picked cosine map on Z_8 (5 orbits): reversal plus one
    // annihilated row.
    let theta = ThetaAssignment::new(vec![
        ThetaTarget::CosineOrbit { index: 4 },
        ThetaTarget::CosineOrbit { index: 3 },
        ThetaTarget::Annihilated,
        ThetaTarget::CosineOrbit { index: 1 },
        ThetaTarget::CosineOrbit { index: 0 },
    ]);
    save_theta(&theta_path, OperatorKind::Cosine, &theta).unwrap();

    let made = convchar(&[
        "make-operator",
        "--kind",
        "cosine",
        "--group",
        "8",
        "--theta",
        theta_path.to_str().unwrap(),
        "--out",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&made), 0, "stderr: {}", stderr(&made));

    let run = convchar(&[
        "extract",
        "--kind",
        "cosine",
        "--operator",
        op.to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report = read_json(&rep);
    let recovered = report["theta"].as_array().expect("theta array");
    assert_eq!(recovered[0]["index"], 4);
    assert_eq!(recovered[2]["type"], "annihilated");
    assert_eq!(recovered[4]["index"], 0);
}

#[test]
fn theta_file_kind_mismatch_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let theta_path = dir.path().join("theta.json");
    let theta = ThetaAssignment::new(vec![ThetaTarget::Dual { index: 0 }]);
    save_theta(&theta_path, OperatorKind::Fourier, &theta).unwrap();

    let run = convchar(&[
        "make-operator",
        "--kind",
        "cosine",
        "--group",
        "1",
        "--theta",
        theta_path.to_str().unwrap(),
        "--out",
        dir.path().join("op.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 2, "stderr: {}", stderr(&run));
    assert!(stderr(&run).contains("tagged"), "stderr: {}", stderr(&run));
}

#[test]
fn missing_operator_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let run = convchar(&[
        "extract",
        "--kind",
        "fourier",
        "--operator",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 2);
    assert!(
        stderr(&run).contains("cannot read"),
        "stderr: {}",
        stderr(&run)
    );
}

#[test]
fn malformed_operator_file_reports_the_location() {
    let dir = TempDir::new().unwrap();
    let op = dir.path().join("bad.json");
    std::fs::write(&op, "{\n  \"kind\": \"fourier\",\n  oops\n}\n").unwrap();
    let run = convchar(&[
        "extract",
        "--kind",
        "fourier",
        "--operator",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("line 3"), "stderr: {}", stderr(&run));
}

#[test]
fn operator_kind_mismatch_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let op = dir.path().join("cosine.json");
    let made = convchar(&[
        "make-operator",
        "--kind",
        "cosine",
        "--group",
        "4",
        "--theta",
        "identity",
        "--out",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&made), 0, "stderr: {}", stderr(&made));

    let run = convchar(&[
        "extract",
        "--kind",
        "fourier",
        "--operator",
        op.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("tagged"), "stderr: {}", stderr(&run));
}

#[test]
fn perturb_is_rejected_for_the_laplace_kind() {
    let dir = TempDir::new().unwrap();
    let run = convchar(&[
        "make-operator",
        "--kind",
        "laplace",
        "--theta",
        "identity",
        "--perturb",
        "0.1",
        "--out",
        dir.path().join("op.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 2);
    assert!(
        stderr(&run).contains("--perturb"),
        "stderr: {}",
        stderr(&run)
    );
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let run = convchar(&["verify-identities", "--group", "4", "--bogus"]);
    assert_eq!(code(&run), 2);
}

#[test]
fn missing_required_group_is_a_usage_error() {
    let run = convchar(&["verify-identities"]);
    assert_eq!(code(&run), 2);
}

#[test]
fn bad_group_spec_is_a_usage_error() {
    let run = convchar(&["verify-identities", "--group", "3y5"]);
    assert_eq!(code(&run), 2);
    assert!(!stderr(&run).is_empty());
}

#[test]
fn laplace_study_writes_the_csv_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("study.csv");
    let run = convchar(&[
        "laplace-study",
        "--h",
        "0.1",
        "--X",
        "3",
        "--functions",
        "exp,exp",
        "--y-grid",
        "1.0:2.0:3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("y,convolution_side,product_side,residual")
    );
    let ys: Vec<f64> = lines
        .map(|line| line.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ys, vec![1.0, 1.5, 2.0]);
}

#[test]
fn laplace_study_gate_fails_with_a_tight_tolerance() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("study.json");
    let run = convchar(&[
        "laplace-study",
        "--h",
        "0.05",
        "--X",
        "4",
        "--tol-eq",
        "1e-12",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 1, "stderr: {}", stderr(&run));
    let report = read_json(&out);
    assert_eq!(report["pass"], Value::Bool(false));
    assert!(report["max_residual"].as_f64().unwrap() > 1e-12);
}

#[test]
fn reports_go_to_stdout_without_an_out_flag() {
    let run = convchar(&["verify-identities", "--group", "6", "--trials", "5"]);
    assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
    let report: Value = serde_json::from_slice(&run.stdout).expect("stdout is a JSON report");
    assert_eq!(report["command"], "verify-identities");
    assert_eq!(report["pass"], Value::Bool(true));
}

#[test]
fn identical_invocations_produce_byte_identical_reports() {
    let dir = TempDir::new().unwrap();
    let mut bodies = Vec::new();
    for run_index in 0..2 {
        let out = dir.path().join(format!("report_{run_index}.json"));
        let run = convchar(&[
            "roundtrip",
            "--kind",
            "cosine",
            "--group",
            "3x4",
            "--seed",
            "17",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&run), 0, "stderr: {}", stderr(&run));
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}
