//! Command-line surface tying generation, verification, extraction, and
//! convergence studies together.
//!
//! Exit codes: 0 = success with every gated residual within tolerance; 1 =
//! a violation was detected (the report is still written); 2 = usage or
//! I/O error. All randomness flows through `--seed` (default 0), and an
//! identical invocation produces a byte-identical report: reports carry no
//! timestamps, maps are ordered, and row order is canonical regardless of
//! how extraction was parallelized.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characterize::{
    extract_theta_cosine, extract_theta_fourier, extract_theta_laplace, verify_factorization,
    ExtractionReport, OperatorKind, ThetaAssignment, ThetaTarget, TransformKind, DEFAULT_TOL,
    DEFAULT_TOL_EQ, DEFAULT_TOL_FIT,
};
use crate::factory::{
    build_from_theta, build_laplace_from_exponents, perturb, random_theta, ThetaShape,
};
use crate::group::FiniteAbelianGroup;
use crate::io::{self, LoadedOperator, SCHEMA_VERSION};
use crate::laplace::{laplace_convolution, laplace_transform, HalfLineGrid, TestFunction};
use crate::signal::Signal;
use crate::transforms::{
    check_dalembert_lemma, check_shift_lemma, cosine_convolution, cosine_transform,
    fourier_convolution, fourier_transform,
};

/// Whether a run detected any violation; decides exit 0 versus exit 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Violation,
}

#[derive(Debug, Parser)]
#[command(
    name = "convchar",
    version,
    about = "Convolution-respecting operators: verify identities, build and extract kernels, study the half-line transform"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Fourier,
    Cosine,
    Laplace,
}

impl From<KindArg> for OperatorKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Fourier => OperatorKind::Fourier,
            KindArg::Cosine => OperatorKind::Cosine,
            KindArg::Laplace => OperatorKind::Laplace,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the transform identities on seeded random signals and report
    /// max residuals per identity.
    VerifyIdentities {
        /// Group spec: cyclic orders joined by 'x', e.g. "8" or "4x3".
        #[arg(long)]
        group: String,
        /// Number of random trials per identity.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gate: every identity must hold within this tolerance
        /// (convolution theorems are normalized by 1 + |f|_1 |g|_1).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Report file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the residual of the half-line convolution identity over a
    /// grid of transform arguments.
    LaplaceStudy {
        /// Grid step.
        #[arg(long = "h", default_value_t = 0.01)]
        h: f64,
        /// Grid horizon; nodes run from 0 to X.
        #[arg(long = "X", default_value_t = 10.0)]
        horizon: f64,
        /// Two built-in test functions, comma separated (exp, const, poly).
        #[arg(long, default_value = "exp,exp")]
        functions: String,
        /// Transform arguments start:end:count, endpoints inclusive.
        #[arg(long = "y-grid", default_value = "0.5:2.0:4")]
        y_grid: String,
        /// When given, gate the max residual at this tolerance; otherwise
        /// the study is informational and always exits 0.
        #[arg(long = "tol-eq")]
        tol_eq: Option<f64>,
        /// Report file; a .csv extension selects the CSV table instead of
        /// JSON (stdout JSON when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an operator kernel file realizing a theta assignment.
    MakeOperator {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Group spec (fourier and cosine kinds).
        #[arg(long)]
        group: Option<String>,
        /// Theta source: "identity", "zero", "random", or a theta JSON
        /// file.
        #[arg(long)]
        theta: String,
        /// Grid step (laplace kind).
        #[arg(long = "h", default_value_t = 0.01)]
        h: f64,
        /// Grid horizon (laplace kind).
        #[arg(long = "X", default_value_t = 10.0)]
        horizon: f64,
        /// Probed transform arguments, one kernel row each (laplace kind).
        #[arg(long = "y-grid", default_value = "0.5:2.5:5")]
        y_grid: String,
        /// Add uniform complex noise of at most this magnitude per entry
        /// (fourier and cosine kinds).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output kernel file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the theta assignment from an operator kernel file,
    /// reporting every stage of the argument.
    Extract {
        /// Expected operator kind; must match the file's kind tag.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Operator kernel JSON file.
        #[arg(long)]
        operator: PathBuf,
        /// Multiplicativity and matching tolerance (fourier and cosine).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Functional-equation tolerance (laplace).
        #[arg(long = "tol-eq", default_value_t = DEFAULT_TOL_EQ)]
        tol_eq: f64,
        /// Exponent-fit tolerance (laplace).
        #[arg(long = "tol-fit", default_value_t = DEFAULT_TOL_FIT)]
        tol_fit: f64,
        /// Report file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plant a seeded random theta, build its operator, extract it back,
    /// and compare.
    Roundtrip {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Group spec (fourier and cosine kinds).
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random signals for the factorization spot check (fourier and
        /// cosine kinds).
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long = "tol-eq", default_value_t = DEFAULT_TOL_EQ)]
        tol_eq: f64,
        #[arg(long = "tol-fit", default_value_t = DEFAULT_TOL_FIT)]
        tol_fit: f64,
        /// Grid step (laplace kind).
        #[arg(long = "h", default_value_t = 0.01)]
        h: f64,
        /// Grid horizon (laplace kind).
        #[arg(long = "X", default_value_t = 10.0)]
        horizon: f64,
        /// Probed transform arguments (laplace kind).
        #[arg(long = "y-grid", default_value = "0.5:2.5:5")]
        y_grid: String,
        /// Report file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Dispatches a parsed invocation. Errors are usage or I/O problems (exit
/// 2); `Outcome::Violation` means a mathematical check failed and its
/// report was written (exit 1).
pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::VerifyIdentities {
            group,
            trials,
            seed,
            tol,
            out,
        } => verify_identities(&group, trials, seed, tol, out.as_deref()),
        Command::LaplaceStudy {
            h,
            horizon,
            functions,
            y_grid,
            tol_eq,
            out,
        } => laplace_study(h, horizon, &functions, &y_grid, tol_eq, out.as_deref()),
        Command::MakeOperator {
            kind,
            group,
            theta,
            h,
            horizon,
            y_grid,
            perturb,
            seed,
            out,
        } => make_operator(
            kind,
            group.as_deref(),
            &theta,
            h,
            horizon,
            &y_grid,
            perturb,
            seed,
            &out,
        ),
        Command::Extract {
            kind,
            operator,
            tol,
            tol_eq,
            tol_fit,
            out,
        } => extract(kind, &operator, tol, tol_eq, tol_fit, out.as_deref()),
        Command::Roundtrip {
            kind,
            group,
            seed,
            trials,
            tol,
            tol_eq,
            tol_fit,
            h,
            horizon,
            y_grid,
            out,
        } => roundtrip(
            kind,
            group.as_deref(),
            seed,
            trials,
            tol,
            tol_eq,
            tol_fit,
            h,
            horizon,
            &y_grid,
            out.as_deref(),
        ),
    }
}

/// Writes a report to `out`, or to stdout when no file was requested.
fn emit<T: Serialize>(out: Option<&Path>, report: &T) -> Result<()> {
    match out {
        Some(path) => io::write_report(path, report).map_err(Into::into),
        None => {
            print!("{}", io::to_report_string(report));
            Ok(())
        }
    }
}

/// Parses "start:end:count" into inclusive equally spaced positive values.
fn parse_y_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("--y-grid must be start:end:count, got {spec:?}");
    }
    let start: f64 = parts[0]
        .parse()
        .with_context(|| format!("bad y-grid start {:?}", parts[0]))?;
    let end: f64 = parts[1]
        .parse()
        .with_context(|| format!("bad y-grid end {:?}", parts[1]))?;
    let count: usize = parts[2]
        .parse()
        .with_context(|| format!("bad y-grid count {:?}", parts[2]))?;
    if !(start.is_finite() && end.is_finite() && start > 0.0 && end > 0.0) {
        bail!("y-grid endpoints must be positive and finite, got {spec:?}");
    }
    if count == 0 {
        bail!("y-grid count must be at least 1");
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect())
}

/// Parses "f,g" into two built-in test functions.
fn parse_functions(spec: &str) -> Result<(TestFunction, TestFunction)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        bail!("--functions must name two functions, e.g. exp,poly (got {spec:?})");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

fn finite_kind(kind: KindArg) -> Option<TransformKind> {
    match kind {
        KindArg::Fourier => Some(TransformKind::Fourier),
        KindArg::Cosine => Some(TransformKind::Cosine),
        KindArg::Laplace => None,
    }
}

fn identity_target(kind: TransformKind, index: usize) -> ThetaTarget {
    match kind {
        TransformKind::Fourier => ThetaTarget::Dual { index },
        TransformKind::Cosine => ThetaTarget::CosineOrbit { index },
    }
}

#[derive(Serialize)]
struct VerifyIdentitiesReport {
    schema_version: u32,
    command: &'static str,
    group: String,
    trials: usize,
    seed: u64,
    tolerance: f64,
    /// Gated: each residual must be within `tolerance` for exit 0.
    identities: BTreeMap<String, f64>,
    /// Reported for the record, but no claim is gated on these.
    informational: BTreeMap<String, f64>,
    pass: bool,
}

fn verify_identities(
    group: &str,
    trials: usize,
    seed: u64,
    tol: f64,
    out: Option<&Path>,
) -> Result<Outcome> {
    let grp: FiniteAbelianGroup = group.parse()?;
    let n = grp.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut fourier_theorem = 0.0f64;
    let mut cosine_theorem = 0.0f64;
    let mut associativity = 0.0f64;
    for _ in 0..trials {
        let f = Signal::random_with(grp.clone(), &mut rng);
        let g = Signal::random_with(grp.clone(), &mut rng);
        let h = Signal::random_with(grp.clone(), &mut rng);
        let scale = 1.0 + f.l1_norm() * g.l1_norm();

        let lhs = fourier_transform(&fourier_convolution(&f, &g)?);
        let rhs = fourier_transform(&f).pointwise_product(&fourier_transform(&g))?;
        fourier_theorem = fourier_theorem.max(lhs.max_abs_diff(&rhs)? / scale);

        let lhs = cosine_transform(&cosine_convolution(&f, &g)?);
        let rhs = cosine_transform(&f).pointwise_product(&cosine_transform(&g))?;
        cosine_theorem = cosine_theorem.max(lhs.max_abs_diff(&rhs)? / scale);

        let left = cosine_convolution(&cosine_convolution(&f, &g)?, &h)?;
        let right = cosine_convolution(&f, &cosine_convolution(&g, &h)?)?;
        associativity = associativity.max(left.max_abs_diff(&right)?);
    }

    let mut shift_lemma = 0.0f64;
    let mut dalembert_lemma = 0.0f64;
    for _ in 0..trials {
        let g_sig = Signal::random_with(grp.clone(), &mut rng);
        let even = g_sig.evenize();
        for a in 0..n {
            for b in 0..n {
                shift_lemma = shift_lemma.max(check_shift_lemma(&g_sig, a, b)?);
                dalembert_lemma = dalembert_lemma.max(check_dalembert_lemma(&even, a, b)?);
            }
        }
    }

    let identities = BTreeMap::from([
        ("cosine_convolution_theorem".to_string(), cosine_theorem),
        ("dalembert_lemma".to_string(), dalembert_lemma),
        ("fourier_convolution_theorem".to_string(), fourier_theorem),
        ("shift_lemma".to_string(), shift_lemma),
    ]);
    let informational = BTreeMap::from([(
        "cosine_convolution_associativity".to_string(),
        associativity,
    )]);
    let pass = identities.values().all(|r| *r <= tol);
    let report = VerifyIdentitiesReport {
        schema_version: SCHEMA_VERSION,
        command: "verify-identities",
        group: grp.spec_string(),
        trials,
        seed,
        tolerance: tol,
        identities,
        informational,
        pass,
    };
    emit(out, &report)?;
    Ok(if pass {
        Outcome::Clean
    } else {
        Outcome::Violation
    })
}

#[derive(Serialize)]
struct StudyRow {
    y: f64,
    convolution_side: f64,
    product_side: f64,
    residual: f64,
}

#[derive(Serialize)]
struct LaplaceStudyReport {
    schema_version: u32,
    command: &'static str,
    h: f64,
    horizon: f64,
    functions: [String; 2],
    y_grid: String,
    rows: Vec<StudyRow>,
    max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

fn laplace_study(
    h: f64,
    horizon: f64,
    functions: &str,
    y_grid: &str,
    tol_eq: Option<f64>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let (fa, fb) = parse_functions(functions)?;
    let ys = parse_y_grid(y_grid)?;
    let grid = HalfLineGrid::with_horizon(h, horizon)?;
    let f = fa.sample(grid.clone());
    let g = fb.sample(grid.clone());
    let conv = laplace_convolution(&f, &g)?;

    let mut rows = Vec::with_capacity(ys.len());
    let mut max_residual = 0.0f64;
    for &y in &ys {
        let lhs = laplace_transform(&conv, y)?;
        let rhs = laplace_transform(&f, y)? * laplace_transform(&g, y)?;
        let residual = (lhs - rhs).norm();
        max_residual = max_residual.max(residual);
        rows.push(StudyRow {
            y,
            convolution_side: lhs.re,
            product_side: rhs.re,
            residual,
        });
    }

    let pass = tol_eq.map(|t| max_residual <= t);
    let report = LaplaceStudyReport {
        schema_version: SCHEMA_VERSION,
        command: "laplace-study",
        h: grid.step(),
        horizon: grid.horizon(),
        functions: [fa.name().to_string(), fb.name().to_string()],
        y_grid: y_grid.to_string(),
        rows,
        max_residual,
        tolerance: tol_eq,
        pass,
    };

    let wants_csv =
        out.is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    if wants_csv {
        let mut text = String::from("y,convolution_side,product_side,residual\n");
        for row in &report.rows {
            text.push_str(&format!(
                "{},{},{},{}\n",
                row.y, row.convolution_side, row.product_side, row.residual
            ));
        }
        let path = out.expect("csv implies an output path");
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    } else {
        emit(out, &report)?;
    }
    Ok(match pass {
        Some(false) => Outcome::Violation,
        _ => Outcome::Clean,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_operator(
    kind: KindArg,
    group: Option<&str>,
    theta_arg: &str,
    h: f64,
    horizon: f64,
    y_grid: &str,
    perturb_eps: f64,
    seed: u64,
    out: &Path,
) -> Result<Outcome> {
    if let Some(tkind) = finite_kind(kind) {
        let Some(group) = group else {
            bail!("--group is required for --kind {kind:?}");
        };
        let grp: FiniteAbelianGroup = group.parse()?;
        let n = tkind.row_count(&grp);
        let theta = match theta_arg {
            "identity" => ThetaAssignment::new((0..n).map(|i| identity_target(tkind, i)).collect()),
            "zero" => ThetaAssignment::new(vec![ThetaTarget::Annihilated; n]),
            "random" => random_theta(&grp, tkind, ThetaShape::Permutation, seed),
            path => {
                let file = io::load_theta(Path::new(path))?;
                if file.kind != tkind.into() {
                    bail!(
                        "theta file {path} is tagged {:?}, but --kind {kind:?} was requested",
                        file.kind
                    );
                }
                file.targets
            }
        };
        let mut op = build_from_theta(&grp, tkind, &theta)?;
        if perturb_eps > 0.0 {
            op = perturb(&op, perturb_eps, seed)?;
        }
        io::save_operator(out, &op)?;
        eprintln!(
            "wrote {} x {} {:?} kernel on {} to {}",
            op.rows(),
            grp.order(),
            tkind,
            grp.spec_string(),
            out.display()
        );
    } else {
        if perturb_eps > 0.0 {
            bail!("--perturb applies to the fourier and cosine kinds only");
        }
        let ys = parse_y_grid(y_grid)?;
        let grid = HalfLineGrid::with_horizon(h, horizon)?;
        let theta = match theta_arg {
            "identity" => {
                ThetaAssignment::new(ys.iter().map(|&y| ThetaTarget::Exponent { z: y }).collect())
            }
            "zero" => ThetaAssignment::new(vec![ThetaTarget::Annihilated; ys.len()]),
            "random" => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ThetaAssignment::new(
                    ys.iter()
                        .map(|_| ThetaTarget::Exponent {
                            z: rng.gen_range(0.5..3.5),
                        })
                        .collect(),
                )
            }
            path => {
                let file = io::load_theta(Path::new(path))?;
                if file.kind != OperatorKind::Laplace {
                    bail!(
                        "theta file {path} is tagged {:?}, but --kind laplace was requested",
                        file.kind
                    );
                }
                file.targets
            }
        };
        let op = build_laplace_from_exponents(grid, ys, &theta)?;
        io::save_laplace_operator(out, &op)?;
        eprintln!(
            "wrote {} x {} laplace kernel (h = {}, X = {}) to {}",
            op.rows(),
            op.grid().count(),
            op.grid().step(),
            op.grid().horizon(),
            out.display()
        );
    }
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct ExtractEnvelope<'a> {
    schema_version: u32,
    command: &'static str,
    #[serde(flatten)]
    report: &'a ExtractionReport,
}

fn extract(
    kind: KindArg,
    operator: &Path,
    tol: f64,
    tol_eq: f64,
    tol_fit: f64,
    out: Option<&Path>,
) -> Result<Outcome> {
    let loaded = io::load_operator(operator)?;
    let requested: OperatorKind = kind.into();
    if loaded.kind() != requested {
        bail!(
            "operator file {} is tagged {:?}, but --kind {:?} was requested",
            operator.display(),
            loaded.kind(),
            requested
        );
    }
    let report = match &loaded {
        LoadedOperator::Finite(op) => match op.kind() {
            TransformKind::Fourier => extract_theta_fourier(op, tol),
            TransformKind::Cosine => extract_theta_cosine(op, tol),
        },
        LoadedOperator::Laplace(kernel) => extract_theta_laplace(kernel, tol_eq, tol_fit),
    };
    emit(
        out,
        &ExtractEnvelope {
            schema_version: SCHEMA_VERSION,
            command: "extract",
            report: &report,
        },
    )?;
    Ok(if report.is_success() {
        Outcome::Clean
    } else {
        Outcome::Violation
    })
}

#[derive(Serialize)]
struct Witness {
    /// One random input signal, values in element order as [re, im].
    input: Vec<[f64; 2]>,
    /// The operator applied to it.
    applied: Vec<[f64; 2]>,
    /// The transform relabeled by the planted theta.
    expected: Vec<[f64; 2]>,
    max_deviation: f64,
}

#[derive(Serialize)]
struct RoundtripReport {
    schema_version: u32,
    command: &'static str,
    kind: OperatorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    seed: u64,
    planted: ThetaAssignment,
    recovered_matches_planted: bool,
    /// Max residual of the factorization spot check on random signals.
    #[serde(skip_serializing_if = "Option::is_none")]
    factorization_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    extraction: ExtractionReport,
}

#[allow(clippy::too_many_arguments)]
fn roundtrip(
    kind: KindArg,
    group: Option<&str>,
    seed: u64,
    trials: usize,
    tol: f64,
    tol_eq: f64,
    tol_fit: f64,
    h: f64,
    horizon: f64,
    y_grid: &str,
    out: Option<&Path>,
) -> Result<Outcome> {
    let report = if let Some(tkind) = finite_kind(kind) {
        let Some(group) = group else {
            bail!("--group is required for --kind {kind:?}");
        };
        let grp: FiniteAbelianGroup = group.parse()?;
        let planted = random_theta(&grp, tkind, ThetaShape::WithAnnihilated, seed);
        let op = build_from_theta(&grp, tkind, &planted)?;
        let extraction = match tkind {
            TransformKind::Fourier => extract_theta_fourier(&op, tol),
            TransformKind::Cosine => extract_theta_cosine(&op, tol),
        };
        let matches = extraction.theta.as_ref() == Some(&planted);
        let factorization_residual = verify_factorization(&op, &planted, trials, seed)?;

        let input = Signal::random(grp.clone(), seed.wrapping_add(1));
        let applied = op.apply(&input)?;
        let spectrum = match tkind {
            TransformKind::Fourier => fourier_transform(&input),
            TransformKind::Cosine => cosine_transform(&input),
        };
        let expected: Vec<Complex64> = planted
            .iter()
            .map(|target| match target {
                ThetaTarget::Annihilated => Complex64::new(0.0, 0.0),
                ThetaTarget::Dual { index } | ThetaTarget::CosineOrbit { index } => {
                    spectrum.at(*index)
                }
                ThetaTarget::Exponent { .. } => unreachable!("finite theta"),
            })
            .collect();
        let max_deviation = applied
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);

        RoundtripReport {
            schema_version: SCHEMA_VERSION,
            command: "roundtrip",
            kind: kind.into(),
            group: Some(grp.spec_string()),
            seed,
            planted,
            recovered_matches_planted: matches,
            factorization_residual: Some(factorization_residual),
            witness: Some(Witness {
                input: io::signal_to_wire(&input),
                applied: io::complex_vec_to_wire(&applied),
                expected: io::complex_vec_to_wire(&expected),
                max_deviation,
            }),
            extraction,
        }
    } else {
        let ys = parse_y_grid(y_grid)?;
        let grid = HalfLineGrid::with_horizon(h, horizon)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planted = ThetaAssignment::new(
            ys.iter()
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        ThetaTarget::Annihilated
                    } else {
                        ThetaTarget::Exponent {
                            z: rng.gen_range(0.5..3.5),
                        }
                    }
                })
                .collect(),
        );
        let op = build_laplace_from_exponents(grid, ys, &planted)?;
        let extraction = extract_theta_laplace(&op, tol_eq, tol_fit);
        let matches = extraction.theta.as_ref().is_some_and(|recovered| {
            recovered
                .iter()
                .zip(planted.iter())
                .all(|(got, want)| match (got, want) {
                    (ThetaTarget::Annihilated, ThetaTarget::Annihilated) => true,
                    (ThetaTarget::Exponent { z }, ThetaTarget::Exponent { z: z0 }) => {
                        (z - z0).abs() <= 1e-8 * z0.max(1.0)
                    }
                    _ => false,
                })
        });

        RoundtripReport {
            schema_version: SCHEMA_VERSION,
            command: "roundtrip",
            kind: kind.into(),
            group: None,
            seed,
            planted,
            recovered_matches_planted: matches,
            factorization_residual: None,
            witness: None,
            extraction,
        }
    };

    let clean = report.recovered_matches_planted && report.extraction.is_success();
    emit(out, &report)?;
    Ok(if clean {
        Outcome::Clean
    } else {
        Outcome::Violation
    })
}
