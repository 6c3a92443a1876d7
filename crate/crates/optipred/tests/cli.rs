//! End-to-end tests of the `optipred` binary: the exit-code contract,
//! report schemas, determinism, and self-verification of emitted reports.

use std::path::Path;
use std::process::{Command, Output};

use optipred::cli::{GrowthReport, ProblemFile, ReportFile};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_optipred"));
    // Pin the tolerance so a stray environment doesn't skew the contract
    // under test.
    cmd.env_remove("OPTIPRED_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn assert_code(out: &Output, expected: i32, what: &str) {
    assert_eq!(
        out.status.code(),
        Some(expected),
        "{what}: expected exit {expected}, got {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
    );
}

/// A 33-candidate degree-2 problem whose optimum sits on the three
/// Chebyshev extreme points {−1, 0, 1} with weights (1/7, 3/7, 3/7).
fn grid_problem() -> String
{
    r#"{
  "schema_version": 1,
  "degree": 2,
  "dim": 1,
  "domain": { "type": "grid", "interval": [-1.0, 1.0], "count": 33 },
  "external_point": [2.0]
}"#
    .to_string()
}

fn write_problem(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("problem.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn design_writes_certified_report() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");

    let out = run(&[
        "design",
        problem.to_str().unwrap(),
        "-o",
        report_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "design on a clean problem");

    let report: ReportFile =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.candidate_count, 33);
    assert_eq!(report.certificate.verdict, "certified");
    assert_eq!(report.support.indices, vec![0, 16, 32]);
    let total: f64 = report.weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-12, "weights sum to {total}");
    assert!((report.christoffel_value - 49.0).abs() < 1e-8);
    assert!(report.timestamp.is_some(), "default run carries a timestamp");
}

#[test]
fn emitted_report_passes_its_own_verify() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 0, "design");

    let out = run(&["verify", problem.to_str().unwrap(), report_path.to_str().unwrap()]);
    assert_code(&out, 0, "verify of a fresh report");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "verify prints PASS lines:\n{stdout}");
    assert!(!stdout.contains("FAIL"), "no FAIL lines expected:\n{stdout}");
}

#[test]
fn no_timestamp_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");

    for (path, label) in [(&first, "first"), (&second, "second")] {
        let out = run(&[
            "design",
            problem.to_str().unwrap(),
            "-o",
            path.to_str().unwrap(),
            "--no-timestamp",
        ]);
        assert_code(&out, 0, label);
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "identical problem bytes must give identical report bytes");

    let report: ReportFile = serde_json::from_slice(&a).unwrap();
    assert!(report.timestamp.is_none());
}

#[test]
fn tampered_weights_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 0, "design");

    // Perturb the support weights by 1e-3, keeping the total at 1 so the
    // failure comes from optimality, not normalization.
    let mut report: ReportFile =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    report.weights[0] += 1e-3;
    report.weights[16] -= 1e-3;
    std::fs::write(&report_path, serde_json::to_string(&report).unwrap()).unwrap();

    let out = run(&["verify", problem.to_str().unwrap(), report_path.to_str().unwrap()]);
    assert_code(&out, 2, "verify of a perturbed report");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "expected a FAIL line:\n{stdout}");
}

#[test]
fn malformed_problem_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "{ this is not json");
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 1, "design on malformed JSON");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"), "diagnostic expected on stderr:\n{stderr}");
    assert!(!report_path.exists(), "no report should be written");
}

#[test]
fn unknown_problem_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = grid_problem().replace("\"degree\": 2,", "\"degree\": 2,\n  \"degre\": 3,");
    let problem = write_problem(dir.path(), &text);
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 1, "design with a misspelled field");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("degre"), "diagnostic should name the field:\n{stderr}");
}

#[test]
fn wrong_schema_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = grid_problem().replace("\"schema_version\": 1", "\"schema_version\": 2");
    let problem = write_problem(dir.path(), &text);
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 1, "design with schema_version 2");
}

#[test]
fn internal_external_point_is_an_input_error() {
    // z0 = 0.5 sits inside the candidate interval: prediction there is
    // interpolation, and the problem is rejected up front.
    let dir = tempfile::tempdir().unwrap();
    let text = grid_problem().replace("[2.0]", "[0.5]");
    let problem = write_problem(dir.path(), &text);
    let report_path = dir.path().join("report.json");

    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 1, "design with an interior prediction point");
}

#[test]
fn hoel_levine_matches_chebyshev_growth() {
    // Degree 3 at z0 = 2: K = T₃(2)² = 26² = 676.
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("hl.json");
    let out = run(&[
        "hoel-levine",
        "-n",
        "3",
        "--z0",
        "2",
        "-o",
        report_path.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_code(&out, 0, "hoel-levine n=3 z0=2");

    let report: ReportFile =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.certificate.verdict, "certified");
    assert_eq!(report.candidate_count, 4);
    assert!((report.christoffel_value - 676.0).abs() < 1e-8);
    assert!((report.growth_value - 26.0).abs() < 1e-10);
}

#[test]
fn hoel_levine_accepts_complex_external_points() {
    // Degree 1 at z0 = i: nodes ±1, weights (1/2, 1/2), K = |i−0|²+1 = 2.
    let out = run(&["hoel-levine", "-n", "1", "--z0", "i"]);
    assert_code(&out, 0, "hoel-levine n=1 z0=i");
    let report: ReportFile = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report.weights[0] - 0.5).abs() < 1e-12);
    assert!((report.weights[1] - 0.5).abs() < 1e-12);
    assert!((report.christoffel_value - 2.0).abs() < 1e-12);
    assert_eq!(report.certificate.verdict, "certified");
}

#[test]
fn hoel_levine_rejects_interior_points() {
    let out = run(&["hoel-levine", "-n", "4", "--z0", "0.5"]);
    assert_code(&out, 1, "hoel-levine with |z0| ≤ 1");
}

#[test]
fn growth_reports_the_chebyshev_polynomial() {
    // Degree 3 on the extreme points at z0 = 2: the extremal polynomial is
    // T₃ itself, with T₃(2) = 26 and equioscillating sign pattern.
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        r#"{
  "schema_version": 1,
  "degree": 3,
  "dim": 1,
  "domain": { "type": "chebyshev-extreme", "degree": 3 },
  "external_point": [2.0]
}"#,
    );

    let out = run(&["growth", problem.to_str().unwrap()]);
    assert_code(&out, 0, "growth");
    let report: GrowthReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report.external_value - 26.0).abs() < 1e-8);
    assert!(report.sup_norm <= 1.0 + 1e-9);
    assert_eq!(report.support, vec![0, 1, 2, 3]);
    assert_eq!(report.sign_pattern, vec![-1, 1, -1, 1]);
    // In the Chebyshev basis T₃ is the pure top coefficient.
    for (k, &c) in report.coefficients.iter().enumerate() {
        let expected = if k == 3 { 1.0 } else { 0.0 };
        assert!((c - expected).abs() < 1e-8, "coefficient {k} = {c}");
    }
}

#[test]
fn csv_export_lists_every_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");
    let csv_path = dir.path().join("weights.csv");

    let out = run(&[
        "design",
        problem.to_str().unwrap(),
        "-o",
        report_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "design with CSV export");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,weight");
    assert_eq!(lines.len(), 34, "header plus one row per candidate");
    let total: f64 = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn reports_round_trip_through_the_problem_schema() {
    // The problem file deserializes into the public struct and re-serializes
    // without loss of meaning.
    let problem: ProblemFile = serde_json::from_str(&grid_problem()).unwrap();
    assert_eq!(problem.schema_version, 1);
    assert_eq!(problem.degree, 2);
    let echoed = serde_json::to_string(&problem).unwrap();
    let again: ProblemFile = serde_json::from_str(&echoed).unwrap();
    assert_eq!(again.degree, problem.degree);
    assert_eq!(again.dim, problem.dim);
}

#[test]
fn invalid_tolerance_env_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");

    let out = bin()
        .env("OPTIPRED_TOL", "not-a-number")
        .args(["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 1, "OPTIPRED_TOL=not-a-number");

    let out = bin()
        .env("OPTIPRED_TOL", "-1e-8")
        .args(["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 1, "OPTIPRED_TOL=-1e-8");
}

#[test]
fn custom_tolerance_lands_in_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), &grid_problem());
    let report_path = dir.path().join("report.json");

    let out = bin()
        .env("OPTIPRED_TOL", "1e-6")
        .args(["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_code(&out, 0, "design with OPTIPRED_TOL=1e-6");
    let report: ReportFile =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.certificate.tolerance, 1e-6);
}

#[test]
fn help_and_version_exit_cleanly() {
    for args in [&["--help"][..], &["--version"][..], &["design", "--help"][..]] {
        let out = run(args);
        assert_code(&out, 0, &format!("{args:?}"));
    }
    // No subcommand at all is a usage error.
    let out = run(&[]);
    assert_code(&out, 1, "bare invocation");
}

#[test]
fn verify_oracle_cross_checks_small_problems() {
    // 5 candidates keeps the oracle on the full set; the report must survive
    // the brute-force cross-check.
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        r#"{
  "schema_version": 1,
  "degree": 3,
  "dim": 1,
  "domain": { "type": "points", "coords": [[-1.0], [-0.5], [0.1], [0.6], [1.0]] },
  "external_point": [1.7]
}"#,
    );
    let report_path = dir.path().join("report.json");
    let out = run(&["design", problem.to_str().unwrap(), "-o", report_path.to_str().unwrap()]);
    assert_code(&out, 0, "design");

    let out = run(&[
        "verify",
        problem.to_str().unwrap(),
        report_path.to_str().unwrap(),
        "--oracle",
        "--resolution",
        "60",
        "--rounds",
        "4",
    ]);
    assert_code(&out, 0, "verify --oracle");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("grid-oracle"), "oracle check should run:\n{stdout}");
}

#[test]
fn missing_problem_file_is_an_input_error() {
    let out = run(&["verify", "/nonexistent/problem.json", "/nonexistent/report.json"]);
    assert_code(&out, 1, "verify with missing files");
}
