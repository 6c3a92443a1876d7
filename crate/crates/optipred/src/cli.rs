//! Problem/report file formats and the command-line front end.
//!
//! File formats are versioned JSON (`schema_version: 1`). Every float is
//! written with 17 significant digits so that a value survives a
//! write/read/write cycle bit-for-bit; reports are therefore byte-identical
//! across runs once the timestamp is suppressed with `--no-timestamp`.
//!
//! Exit codes are a stable contract:
//! 0 solved and certified (or certification not applicable, with caveats),
//! 1 input error, 2 certification failure, 3 solver failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::basis::{chebyshev_extreme_points, BasisKind, PolyBasis, C64};
use crate::design::{
    certify, optimal_design, restrict_to_support, vandermonde, CandidateSet, Certificate,
    DesignMeasure, ExternalPoint, ExternalValues, HoelLevineDesign, OptimalDesign, Verdict,
};
use crate::error::{Error, Result};
use crate::l1;
use crate::oracle::{fd_gradient_check, grid_min_christoffel, GridSpec};
use crate::simplex::SimplexConfig;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Environment variable overriding the certification tolerance (default 1e−8).
pub const TOL_ENV_VAR: &str = "OPTIPRED_TOL";

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// A real number or an {re, im} pair, so problem files can state complex
/// external points without a separate schema.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl JsonScalar {
    pub fn to_c64(self) -> C64 {
        match self {
            JsonScalar::Real(x) => C64::new(x, 0.0),
            JsonScalar::Complex { re, im } => C64::new(re, im),
        }
    }

    pub fn from_c64(z: C64) -> JsonScalar {
        if z.im == 0.0 {
            JsonScalar::Real(z.re)
        } else {
            JsonScalar::Complex { re: z.re, im: z.im }
        }
    }
}

/// Candidate-set description in a problem file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum DomainSpec {
    /// The degree+1 extreme points of the Chebyshev polynomial (univariate).
    #[serde(rename = "chebyshev-extreme")]
    ChebyshevExtreme { degree: usize },
    /// Equispaced points on an interval, endpoints included (univariate).
    #[serde(rename = "grid")]
    Grid { interval: [f64; 2], count: usize },
    /// Explicit list of points.
    #[serde(rename = "points")]
    Points { coords: Vec<Vec<f64>> },
}

/// Input: the polynomial space, the candidate set, and the external point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub degree: usize,
    pub dim: usize,
    /// Basis name; defaults to "chebyshev" for dim 1 and
    /// "total-degree-monomial" otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    pub domain: DomainSpec,
    pub external_point: Vec<JsonScalar>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportInfo {
    /// Candidate indices with weight above threshold, ascending.
    pub indices: Vec<usize>,
    /// Their coordinates.
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateInfo {
    /// "certified" | "failed" | "not-applicable".
    pub verdict: String,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationarity_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_support_excess: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
}

impl CertificateInfo {
    fn from_certificate(cert: &Certificate) -> CertificateInfo {
        let opt = |x: f64| x.is_finite().then_some(x);
        CertificateInfo {
            verdict: match cert.verdict {
                Verdict::Certified => "certified",
                Verdict::Failed => "failed",
                Verdict::NotApplicable => "not-applicable",
            }
            .to_string(),
            tolerance: cert.tolerance,
            duality_gap: cert.duality_gap.and_then(opt),
            stationarity_residual: opt(cert.stationarity_residual),
            off_support_excess: opt(cert.off_support_excess),
            euler_residual: opt(cert.euler_residual),
            explanation: cert.explanation.clone(),
        }
    }
}

/// Output of `design` and `hoel-levine`: the measure, its Christoffel value,
/// the ℓ1 pair behind it, and the certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub basis: String,
    pub degree: usize,
    pub dim: usize,
    pub candidate_count: usize,
    pub external_point: Vec<JsonScalar>,
    /// One weight per candidate, summing to 1.
    pub weights: Vec<f64>,
    pub support: SupportInfo,
    /// K = pᵗG(w)⁻¹p.
    pub christoffel_value: f64,
    /// √K, the growth factor.
    pub growth_value: f64,
    /// ‖c‖₁ from the ℓ1 solve (sum of moduli in complex mode).
    pub l1_value: f64,
    /// The ℓ1 minimizer c, one entry per candidate.
    pub primal_c: Vec<JsonScalar>,
    /// Dual coefficients z of the growth polynomial. For a complex external
    /// point this is the dual of the stacked real system (length 2N) — see
    /// the caveats.
    pub dual_z: Vec<f64>,
    pub certificate: CertificateInfo,
    pub caveats: Vec<String>,
}

/// Output of `growth`: the extremal polynomial alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReport {
    pub schema_version: u32,
    pub basis: String,
    pub degree: usize,
    pub dim: usize,
    /// Coefficients of the extremal polynomial in the working basis.
    pub coefficients: Vec<f64>,
    /// Value at the external point (= √K for the optimal design).
    pub external_value: f64,
    /// max |Q| over the candidates; ≤ 1 up to solver tolerance.
    pub sup_norm: f64,
    /// Q at every candidate point.
    pub candidate_values: Vec<f64>,
    /// Candidate indices where the ℓ1 minimizer c is nonzero.
    pub support: Vec<usize>,
    /// sgn(cᵢ) on the support; Q attains it there, Q(xᵢ) = sgn(cᵢ).
    pub sign_pattern: Vec<i8>,
}

// ---------------------------------------------------------------------------
// JSON with reproducible floats
// ---------------------------------------------------------------------------

/// Pretty JSON with every float printed as `{:.16e}`: 17 significant digits,
/// enough to reproduce any f64 exactly, and a fixed format so equal values
/// always serialize to equal bytes.
struct Pretty17 {
    indent: usize,
    has_value: bool,
}

impl Pretty17 {
    fn new() -> Pretty17 {
        Pretty17 { indent: 0, has_value: false }
    }

    fn newline<W: ?Sized + std::io::Write>(&self, writer: &mut W) -> std::io::Result<()> {
        writer.write_all(b"\n")?;
        for _ in 0..self.indent {
            writer.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for Pretty17 {
    fn write_f64<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"[")
    }

    fn end_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn end_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        _writer: &mut W,
    ) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"{")
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
    ) -> std::io::Result<()> {
        writer.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + std::io::Write>(
        &mut self,
        _writer: &mut W,
    ) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serializes any report type with the reproducible float format, newline
/// terminated.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Pretty17::new());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serializer emits UTF-8"))
}

// ---------------------------------------------------------------------------
// Problem construction
// ---------------------------------------------------------------------------

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i" into a complex number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty number".into()));
    }
    let invalid = || Error::InvalidInput(format!("cannot parse {s:?} as a number"));

    if let Some(imag) = s.strip_suffix(['i', 'I']) {
        // Split at the last +/− that is neither leading nor an exponent sign.
        let bytes = imag.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k];
            if (c == b'+' || c == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E' {
                split = Some(k);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(k) => (&imag[..k], &imag[k..]),
            None => ("", imag),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse::<f64>().map_err(|_| invalid())?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| invalid())?,
        };
        Ok(C64::new(re, im))
    } else {
        let re = s.parse::<f64>().map_err(|_| invalid())?;
        Ok(C64::new(re, 0.0))
    }
}

/// Turns a validated problem file into the solver inputs.
pub fn build_problem(problem: &ProblemFile) -> Result<(PolyBasis, CandidateSet)> {
    if problem.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            problem.schema_version
        )));
    }
    let kind = match &problem.basis {
        Some(name) => name.parse::<BasisKind>()?,
        None => {
            if problem.dim == 1 {
                BasisKind::Chebyshev
            } else {
                BasisKind::TotalDegreeMonomial
            }
        }
    };
    let basis = PolyBasis::new(kind, problem.degree, problem.dim)?;

    if problem.external_point.len() != problem.dim {
        return Err(Error::DimensionMismatch {
            expected: problem.dim,
            got: problem.external_point.len(),
        });
    }
    let coords: Vec<C64> = problem.external_point.iter().map(|s| s.to_c64()).collect();
    if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidInput("external point is not finite".into()));
    }
    let external = ExternalPoint::complex(coords);

    let points = match &problem.domain {
        DomainSpec::ChebyshevExtreme { degree } => {
            if problem.dim != 1 {
                return Err(Error::InvalidDimension(
                    "chebyshev-extreme domain is univariate".into(),
                ));
            }
            chebyshev_extreme_points(*degree)?
                .into_iter()
                .map(|x| vec![x])
                .collect()
        }
        DomainSpec::Grid { interval, count } => {
            if problem.dim != 1 {
                return Err(Error::InvalidDimension("grid domain is univariate".into()));
            }
            let [a, b] = *interval;
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "grid interval [{a}, {b}] must satisfy a < b"
                )));
            }
            if *count < 2 {
                return Err(Error::InvalidInput("grid needs at least 2 points".into()));
            }
            (0..*count)
                .map(|i| vec![a + (b - a) * i as f64 / (*count as f64 - 1.0)])
                .collect()
        }
        DomainSpec::Points { coords } => coords.clone(),
    };

    let candidates = CandidateSet::new(points, external)?;
    Ok((basis, candidates))
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "optipred",
    version,
    about = "Optimal prediction measures for polynomial extrapolation on finite candidate sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and write a certified design report.
    Design {
        /// Problem JSON file.
        problem: PathBuf,
        /// Where to write the report JSON.
        #[arg(short, long)]
        output: PathBuf,
        /// Also export a candidate/weight table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Omit the timestamp so identical inputs give identical bytes.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Closed-form minimum-variance extrapolation design on the Chebyshev
    /// extreme points.
    HoelLevine {
        /// Polynomial degree n ≥ 1.
        #[arg(short = 'n', long = "degree")]
        degree: usize,
        /// External point: a real like 2.5 or a complex like 1+0.5i.
        #[arg(long)]
        z0: String,
        /// Report destination; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Omit the timestamp so identical inputs give identical bytes.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Compute the extremal growth polynomial for a problem.
    Growth {
        /// Problem JSON file (real external point).
        problem: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-check a report against its problem, optionally against the grid
    /// oracle.
    Verify {
        /// Problem JSON file.
        problem: PathBuf,
        /// Report JSON file produced by `design` or `hoel-levine`.
        report: PathBuf,
        /// Cross-check against brute-force grid minimization (restricted to
        /// the support when there are more than 8 candidates).
        #[arg(long)]
        oracle: bool,
        /// Grid resolution for --oracle (default 50).
        #[arg(long)]
        resolution: Option<usize>,
        /// Refinement rounds for --oracle (default 6).
        #[arg(long)]
        rounds: Option<usize>,
    },
}

/// Entry point for the binary: parses arguments, runs, maps everything to
/// the exit-code contract.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits, not usage errors.
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };

    let tolerance = match read_tolerance() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };

    let outcome = match cli.command {
        Command::Design { problem, output, csv, no_timestamp } => {
            cmd_design(&problem, &output, csv.as_deref(), no_timestamp, tolerance)
        }
        Command::HoelLevine { degree, z0, output, no_timestamp } => {
            cmd_hoel_levine(degree, &z0, output.as_deref(), no_timestamp, tolerance)
        }
        Command::Growth { problem, output } => cmd_growth(&problem, output.as_deref()),
        Command::Verify { problem, report, oracle, resolution, rounds } => {
            cmd_verify(&problem, &report, oracle, resolution, rounds, tolerance)
        }
    };

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_)
        | Error::Unbounded
        | Error::IterationLimit(_)
        | Error::DegenerateDesign => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

fn read_tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV_VAR) {
        Ok(raw) => {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{TOL_ENV_VAR}={raw:?} is not a number")))?;
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{TOL_ENV_VAR} must be a positive number, got {raw:?}"
                )));
            }
            Ok(tol)
        }
        Err(std::env::VarError::NotPresent) => Ok(1e-8),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Error::InvalidInput(format!("{TOL_ENV_VAR} is not valid unicode")))
        }
    }
}

fn read_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read_report(path: &Path) -> Result<ReportFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn build_report(
    problem: &ProblemFile,
    basis: &PolyBasis,
    candidates: &CandidateSet,
    od: &OptimalDesign,
    with_timestamp: bool,
) -> ReportFile {
    let support_points = od
        .design
        .support
        .iter()
        .map(|&i| candidates.points()[i].clone())
        .collect();
    let l1_value = if od.complex_mode {
        od.coefficients.iter().map(|c| c.norm()).sum()
    } else {
        od.solution.value
    };
    let mut caveats = od.caveats.clone();
    if od.complex_mode {
        caveats.push(
            "dual_z belongs to the stacked real system [Re; Im], not to a single \
             polynomial"
                .to_string(),
        );
    }
    ReportFile {
        schema_version: SCHEMA_VERSION,
        timestamp: with_timestamp.then(timestamp_now),
        basis: basis.kind().to_string(),
        degree: basis.degree(),
        dim: basis.spatial_dim(),
        candidate_count: candidates.len(),
        external_point: problem.external_point.clone(),
        weights: od.design.weights.iter().cloned().collect(),
        support: SupportInfo { indices: od.design.support.clone(), points: support_points },
        christoffel_value: od.design.christoffel,
        growth_value: od.design.growth(),
        l1_value,
        primal_c: od.coefficients.iter().map(|&c| JsonScalar::from_c64(c)).collect(),
        dual_z: od.solution.dual.iter().cloned().collect(),
        certificate: CertificateInfo::from_certificate(&od.certificate),
        caveats,
    }
}

fn write_csv(path: &Path, candidates: &CandidateSet, weights: &[f64]) -> Result<()> {
    let mut out = String::new();
    let dim = candidates.dim();
    if dim == 1 {
        out.push_str("x,weight\n");
    } else {
        for j in 0..dim {
            out.push_str(&format!("x{},", j + 1));
        }
        out.push_str("weight\n");
    }
    for (pt, w) in candidates.points().iter().zip(weights) {
        for c in pt {
            out.push_str(&format!("{c:.16e},"));
        }
        out.push_str(&format!("{w:.16e}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Certified | Verdict::NotApplicable => EXIT_OK,
        Verdict::Failed => EXIT_CERTIFICATION,
    }
}

fn cmd_design(
    problem_path: &Path,
    output: &Path,
    csv: Option<&Path>,
    no_timestamp: bool,
    tolerance: f64,
) -> Result<i32> {
    let problem = read_problem(problem_path)?;
    let (basis, candidates) = build_problem(&problem)?;
    let od = optimal_design(&basis, &candidates, &SimplexConfig::default(), tolerance)?;
    let report = build_report(&problem, &basis, &candidates, &od, !no_timestamp);
    std::fs::write(output, to_json_string(&report)?)?;
    if let Some(csv_path) = csv {
        write_csv(csv_path, &candidates, &report.weights)?;
    }

    println!(
        "candidates: {}  support: {}  K = {:.12e}  growth = {:.12e}",
        candidates.len(),
        od.design.support.len(),
        od.design.christoffel,
        od.design.growth(),
    );
    println!("certificate: {}", report.certificate.verdict);
    for caveat in &report.caveats {
        eprintln!("note: {caveat}");
    }
    Ok(report_exit(od.certificate.verdict))
}

fn cmd_hoel_levine(
    degree: usize,
    z0_raw: &str,
    output: Option<&Path>,
    no_timestamp: bool,
    tolerance: f64,
) -> Result<i32> {
    let z0 = parse_complex(z0_raw)?;
    let hl = crate::design::hoel_levine_design(degree, z0)?;
    let (report, verdict) = hoel_levine_report(&hl, no_timestamp, tolerance)?;
    write_or_print(output, &to_json_string(&report)?)?;
    if output.is_some() {
        println!(
            "support: {} points  K = {:.12e}  growth = {:.12e}",
            report.support.indices.len(),
            report.christoffel_value,
            report.growth_value,
        );
    }
    Ok(report_exit(verdict))
}

fn hoel_levine_report(
    hl: &HoelLevineDesign,
    no_timestamp: bool,
    tolerance: f64,
) -> Result<(ReportFile, Verdict)> {
    let basis = PolyBasis::new(BasisKind::Chebyshev, hl.degree, 1)?;
    let points: Vec<Vec<f64>> = hl.points.iter().map(|&x| vec![x]).collect();
    let external = ExternalPoint::complex(vec![hl.z0]);
    let candidates = CandidateSet::new(points, external)?;
    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;

    let lambda: f64 = hl.lagrange.iter().map(|l| l.norm()).sum();
    let certificate = certify(&hl.design, &v, &p, Some(lambda), tolerance);

    // For real z0 the growth polynomial is ±T_n itself: coefficient vector
    // e_n in the Chebyshev basis, signed to be positive at z0.
    let dual_z = if hl.z0.im == 0.0 {
        let mut z = vec![0.0; basis.dimension()];
        z[basis.dimension() - 1] = if crate::basis::chebyshev_table(hl.z0.re, hl.degree)
            [hl.degree]
            >= 0.0
        {
            1.0
        } else {
            -1.0
        };
        z
    } else {
        Vec::new()
    };

    let mut caveats = Vec::new();
    if hl.z0.im != 0.0 {
        caveats.push(
            "complex external point: no single real growth polynomial; dual_z omitted"
                .to_string(),
        );
    }

    let problem_echo = vec![JsonScalar::from_c64(hl.z0)];
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        timestamp: (!no_timestamp).then(timestamp_now),
        basis: basis.kind().to_string(),
        degree: hl.degree,
        dim: 1,
        candidate_count: hl.points.len(),
        external_point: problem_echo,
        weights: hl.design.weights.iter().cloned().collect(),
        support: SupportInfo {
            indices: hl.design.support.clone(),
            points: hl.points.iter().map(|&x| vec![x]).collect(),
        },
        christoffel_value: hl.design.christoffel,
        growth_value: hl.design.growth(),
        l1_value: lambda,
        primal_c: hl.lagrange.iter().map(|&c| JsonScalar::from_c64(c)).collect(),
        dual_z,
        certificate: CertificateInfo::from_certificate(&certificate),
        caveats,
    };
    Ok((report, certificate.verdict))
}

fn cmd_growth(problem_path: &Path, output: Option<&Path>) -> Result<i32> {
    let problem = read_problem(problem_path)?;
    let (basis, candidates) = build_problem(&problem)?;
    if !candidates.external().is_real() {
        return Err(Error::InvalidInput(
            "the growth polynomial is defined for real external points".into(),
        ));
    }
    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;
    let sol = l1::solve_l1_dual(&v.matrix.transpose(), p.re(), &SimplexConfig::default())?;
    let q = crate::design::extremal_polynomial(&v, &sol)?;

    let report = GrowthReport {
        schema_version: SCHEMA_VERSION,
        basis: basis.kind().to_string(),
        degree: basis.degree(),
        dim: basis.spatial_dim(),
        coefficients: q.coefficients.iter().cloned().collect(),
        external_value: q.external_value,
        sup_norm: q.sup_norm,
        candidate_values: q.candidate_values.iter().cloned().collect(),
        support: sol.support.clone(),
        sign_pattern: sol
            .support
            .iter()
            .map(|&i| if sol.coefficients[i] >= 0.0 { 1 } else { -1 })
            .collect(),
    };
    write_or_print(output, &to_json_string(&report)?)?;
    Ok(EXIT_OK)
}

struct CheckList {
    failed: bool,
}

impl CheckList {
    fn new() -> CheckList {
        CheckList { failed: false }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("PASS {name}: {detail}");
        } else {
            self.failed = true;
            println!("FAIL {name}: {detail}");
        }
    }

    fn note(&mut self, name: &str, detail: String) {
        println!("note {name}: {detail}");
    }
}

fn cmd_verify(
    problem_path: &Path,
    report_path: &Path,
    oracle: bool,
    resolution: Option<usize>,
    rounds: Option<usize>,
    tolerance: f64,
) -> Result<i32> {
    let problem = read_problem(problem_path)?;
    let report = read_report(report_path)?;
    let (basis, candidates) = build_problem(&problem)?;

    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported report schema_version {}",
            report.schema_version
        )));
    }
    if report.candidate_count != candidates.len() || report.weights.len() != candidates.len() {
        return Err(Error::InvalidInput(format!(
            "report was made for {} candidates, problem has {}",
            report.weights.len(),
            candidates.len()
        )));
    }
    if report.degree != basis.degree()
        || report.dim != basis.spatial_dim()
        || report.basis != basis.kind().to_string()
    {
        return Err(Error::InvalidInput(
            "report basis/degree/dim do not match the problem".into(),
        ));
    }

    let v = vandermonde(&basis, &candidates)?;
    let p = ExternalValues::new(&basis, candidates.external())?;
    let config = SimplexConfig::default();
    let mut checks = CheckList::new();

    // Weights: nonnegative, unit sum up to repair tolerance.
    let mut weights = DVector::from_column_slice(&report.weights);
    if weights.iter().any(|&w| w < -1e-12 || !w.is_finite()) {
        return Err(Error::InvalidWeights("report weights are negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-2 {
        return Err(Error::InvalidWeights(format!("report weights sum to {total}")));
    }
    if (total - 1.0).abs() > 1e-12 {
        checks.note("weights-sum", format!("renormalized from {total:.17e}"));
        weights /= total;
    }
    for w in weights.iter_mut() {
        if *w < 0.0 {
            *w = 0.0;
        }
    }

    // Fresh solve of the same problem for the reference optimum.
    let od = optimal_design(&basis, &candidates, &config, tolerance)?;

    match DesignMeasure::from_weights(weights.clone(), &v, &p, config.support_threshold) {
        Ok(design) => {
            let k = design.christoffel;
            let k_dev = (k - report.christoffel_value).abs() / (1.0 + k.abs());
            checks.check(
                "christoffel-recompute",
                k_dev <= tolerance,
                format!("K = {k:.12e}, report {:.12e}, deviation {k_dev:.3e}", report.christoffel_value),
            );
            let growth_dev = (report.growth_value * report.growth_value - k).abs() / (1.0 + k);
            checks.check(
                "growth-consistency",
                growth_dev <= tolerance,
                format!("growth² vs K deviation {growth_dev:.3e}"),
            );

            if od.complex_mode {
                // No scalar duality certificate in complex mode: compare the
                // reported weights against a fresh surrogate solve.
                let w_dev = (0..weights.len())
                    .map(|i| (weights[i] - od.design.weights[i]).abs())
                    .fold(0.0f64, f64::max);
                checks.check(
                    "weights-recompute",
                    w_dev <= 1e-6,
                    format!("max weight deviation {w_dev:.3e}"),
                );
                if od.certificate.verdict == Verdict::Certified {
                    let cert = certify(&design, &v, &p, Some(od.design.growth()), tolerance);
                    checks.check(
                        "certificate",
                        cert.verdict == Verdict::Certified,
                        cert.explanation.unwrap_or_else(|| "all conditions hold".into()),
                    );
                } else {
                    checks.note("certificate", "not applicable (complex surrogate)".into());
                }
            } else {
                let cert = certify(&design, &v, &p, Some(od.solution.value), tolerance);
                let gap = cert.duality_gap.unwrap_or(f64::INFINITY);
                checks.check(
                    "duality-gap",
                    gap <= tolerance,
                    format!("|√K − ‖c‖₁|/(1+‖c‖₁) = {gap:.3e}"),
                );
                checks.check(
                    "stationarity",
                    cert.stationarity_residual <= tolerance
                        && cert.off_support_excess <= tolerance,
                    format!(
                        "support residual {:.3e}, off-support excess {:.3e}",
                        cert.stationarity_residual, cert.off_support_excess
                    ),
                );

                if oracle {
                    let spec = GridSpec::new(resolution.unwrap_or(50), rounds.unwrap_or(6));
                    // Lattice search over many candidates is hopeless (the
                    // refinement neighborhood grows as 5^M), but over the
                    // support it is cheap, and off-support optimality is
                    // already covered by the stationarity check above.
                    let (v_grid, scope) = if candidates.len() <= 8 {
                        (v.matrix.clone(), "full candidate set")
                    } else {
                        let (v_sub, _, _) = restrict_to_support(&v, &design);
                        (v_sub, "support-restricted")
                    };
                    let min = grid_min_christoffel(&v_grid, &p, &spec)?;
                    let dev = (min.value - k).abs() / k;
                    checks.check(
                        "grid-oracle",
                        min.value >= od.solution.value * od.solution.value - 1e-9
                            && dev <= 5e-3,
                        format!(
                            "{scope}: grid min {:.12e} after {} evaluations, deviation {dev:.3e}",
                            min.value, min.evaluations
                        ),
                    );

                    let (v_sub, w_sub, _) = restrict_to_support(&v, &design);
                    let min_w = w_sub.iter().cloned().fold(f64::INFINITY, f64::min);
                    if v_sub.nrows() >= basis.dimension() && min_w > 0.0 {
                        let step = (min_w / 16.0).min(1e-5);
                        let worst = fd_gradient_check(&v_sub, &p, &w_sub, step)?;
                        checks.check(
                            "fd-gradient",
                            worst <= 1e-4,
                            format!("worst deviation {worst:.3e}"),
                        );
                    } else {
                        checks.note(
                            "fd-gradient",
                            "skipped: support too small for an invertible design".into(),
                        );
                    }
                }
            }
        }
        Err(Error::DegenerateDesign) => {
            // The reported design is singular. Accept only if a fresh solve
            // agrees with the weights and caveats declared it.
            let declared = report.caveats.iter().any(|c| c.contains("singular"));
            let w_dev = (0..weights.len())
                .map(|i| (weights[i] - od.design.weights[i]).abs())
                .fold(0.0f64, f64::max);
            checks.check(
                "degenerate-design",
                declared && w_dev <= 1e-6,
                format!(
                    "singular information matrix; declared: {declared}, max weight \
                     deviation {w_dev:.3e}"
                ),
            );
        }
        Err(e) => return Err(e),
    }

    if checks.failed {
        println!("verdict: FAIL");
        Ok(EXIT_CERTIFICATION)
    } else {
        println!("verdict: ok");
        Ok(EXIT_OK)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2.5").unwrap(), C64::new(2.5, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), C64::new(-1.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("1.5-0.5i").unwrap(), C64::new(1.5, -0.5));
        assert_eq!(parse_complex("-1e-2+3e1i").unwrap(), C64::new(-0.01, 30.0));
        assert_eq!(parse_complex("1+i").unwrap(), C64::new(1.0, 1.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn json_floats_round_trip() {
        #[derive(Serialize, Deserialize)]
        struct Blob {
            values: Vec<f64>,
        }
        let blob = Blob {
            values: vec![
                1.0 / 3.0,
                42.0,
                -0.0,
                1e-300,
                3.0_f64.sqrt(),
                f64::MIN_POSITIVE,
                -7.123456789012345e17,
            ],
        };
        let text = to_json_string(&blob).unwrap();
        let back: Blob = serde_json::from_str(&text).unwrap();
        for (a, b) in blob.values.iter().zip(&back.values) {
            assert_eq!(a.to_bits(), b.to_bits(), "{a:e} came back as {b:e}");
        }
        // Same value, same bytes.
        let again = to_json_string(&blob).unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn scalar_forms_deserialize() {
        let p: ProblemFile = serde_json::from_str(
            r#"{
                "schema_version": 1,
                "degree": 1,
                "dim": 1,
                "domain": {"type": "points", "coords": [[-1.0], [1.0]]},
                "external_point": [{"re": 0.0, "im": 1.0}]
            }"#,
        )
        .unwrap();
        assert_eq!(p.external_point.len(), 1);
        let z = p.external_point[0].to_c64();
        assert_eq!(z, C64::new(0.0, 1.0));

        let (basis, candidates) = build_problem(&p).unwrap();
        assert_eq!(basis.kind(), BasisKind::Chebyshev);
        assert_eq!(candidates.len(), 2);
        assert!(!candidates.external().is_real());
    }

    #[test]
    fn grid_domain_hits_endpoints_and_midpoint() {
        let p: ProblemFile = serde_json::from_str(
            r#"{
                "schema_version": 1,
                "degree": 2,
                "dim": 1,
                "domain": {"type": "grid", "interval": [-1.0, 1.0], "count": 33},
                "external_point": [2.0]
            }"#,
        )
        .unwrap();
        let (_, candidates) = build_problem(&p).unwrap();
        assert_eq!(candidates.len(), 33);
        assert_eq!(candidates.points()[0][0], -1.0);
        assert_eq!(candidates.points()[16][0], 0.0);
        assert_eq!(candidates.points()[32][0], 1.0);
    }

    #[test]
    fn schema_violations_are_input_errors() {
        let bad_version: ProblemFile = serde_json::from_str(
            r#"{
                "schema_version": 2,
                "degree": 1,
                "dim": 1,
                "domain": {"type": "points", "coords": [[-1.0], [1.0]]},
                "external_point": [2.0]
            }"#,
        )
        .unwrap();
        assert!(matches!(build_problem(&bad_version), Err(Error::InvalidInput(_))));

        let unknown_field: std::result::Result<ProblemFile, _> = serde_json::from_str(
            r#"{
                "schema_version": 1,
                "degree": 1,
                "dim": 1,
                "domain": {"type": "points", "coords": [[-1.0], [1.0]]},
                "external_point": [2.0],
                "surprise": true
            }"#,
        );
        assert!(unknown_field.is_err());
    }

    #[test]
    fn hoel_levine_report_is_certified() {
        let hl = crate::design::hoel_levine_design(2, C64::new(2.0, 0.0)).unwrap();
        let (report, verdict) = hoel_levine_report(&hl, true, 1e-8).unwrap();
        assert_eq!(verdict, Verdict::Certified);
        assert_relative_eq!(report.christoffel_value, 49.0, max_relative = 1e-10);
        assert_relative_eq!(report.growth_value, 7.0, max_relative = 1e-10);
        assert_relative_eq!(report.l1_value, 7.0, max_relative = 1e-10);
        // Growth polynomial is +T₂ (positive at z0 = 2): e₂ in this basis.
        assert_eq!(report.dual_z, vec![0.0, 0.0, 1.0]);
        // c alternates like the Lagrange values (1, −3, 3).
        match report.primal_c[1] {
            JsonScalar::Real(x) => assert_relative_eq!(x, -3.0, epsilon = 1e-10),
            _ => panic!("expected real coefficient"),
        }
    }
}
