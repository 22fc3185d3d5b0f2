//! Executable versions of the three characterization theorems.
//!
//! Given an operator presented as an explicit kernel, this module verifies
//! the convolution property, extracts the relabeling map theta through the
//! constructive pivot-witness argument, and certifies the factorization
//! `T = transform . theta`. Every stage of the argument is a reported,
//! individually failable check rather than an assumption.

mod cosine;
mod fourier;
mod laplace_op;

pub use cosine::{extract_cosine_row, extract_theta_cosine};
pub use fourier::{extract_fourier_row, extract_theta_fourier};
pub use laplace_op::extract_theta_laplace;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteAbelianGroup;
use crate::laplace::HalfLineGrid;
use crate::signal::Signal;
use crate::transforms::{cosine_transform, fourier_transform};

/// Default tolerance for the finite-group paths, where everything is exact
/// up to round-off.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default tolerance for the grid-side functional-equation checks, which are
/// quadrature-limited rather than round-off-limited.
pub const DEFAULT_TOL_EQ: f64 = 1e-6;
/// Default tolerance for the exponential fit and its verification.
pub const DEFAULT_TOL_FIT: f64 = 1e-6;

/// Which finite-group transform an operator claims to factor through; this
/// fixes both the output index set and the convolution being respected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Fourier,
    Cosine,
}

impl TransformKind {
    /// Number of output rows an operator of this kind has on `group`.
    pub fn row_count(&self, group: &FiniteAbelianGroup) -> usize {
        match self {
            TransformKind::Fourier => group.order(),
            TransformKind::Cosine => group.cosine_class_size(),
        }
    }
}

/// Kind tag covering all three extraction paths, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Fourier,
    Cosine,
    Laplace,
}

impl From<TransformKind> for OperatorKind {
    fn from(kind: TransformKind) -> Self {
        match kind {
            TransformKind::Fourier => OperatorKind::Fourier,
            TransformKind::Cosine => OperatorKind::Cosine,
        }
    }
}

/// Structural errors: malformed kernels and theta assignments. These are
/// input mistakes, as opposed to [`ExtractionError`]s, which are judgements
/// about a well-formed operator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("kernel has {found} rows, expected {expected} for this kind and group")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("kernel row {row} has {found} columns, expected {expected}")]
    ColumnCountMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite kernel entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("operator and signal groups differ ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    #[error("operator grid and signal grid differ")]
    GridMismatch,
    #[error("sample parameter at row {row} must be positive, got {y}")]
    NonPositiveSample { row: usize, y: f64 },
    #[error("theta has {found} targets, expected {expected}")]
    ThetaLengthMismatch { expected: usize, found: usize },
    #[error("theta target for row {row} has the wrong kind for this operator")]
    TargetKindMismatch { row: usize },
    #[error("theta target index {index} at row {row} out of range (< {bound})")]
    TargetOutOfRange {
        row: usize,
        index: usize,
        bound: usize,
    },
    #[error("theta exponent at row {row} must be positive and finite, got {z}")]
    InvalidExponent { row: usize, z: f64 },
}

/// A linear operator `T` from signals on a group to functions on the dual
/// index set, given by an explicit dense kernel: `T(f)[r] = sum_x
/// kernel[r][x] f[x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeOperator {
    group: FiniteAbelianGroup,
    kind: TransformKind,
    kernel: Vec<Vec<Complex64>>,
}

impl MultiplicativeOperator {
    /// Wraps a kernel matrix. Row count must match the kind's index set
    /// (group order for Fourier, cosine-orbit count for cosine); every row
    /// must have one column per group element; entries must be finite.
    pub fn new(
        group: FiniteAbelianGroup,
        kind: TransformKind,
        kernel: Vec<Vec<Complex64>>,
    ) -> Result<Self, OperatorError> {
        let expected_rows = kind.row_count(&group);
        if kernel.len() != expected_rows {
            return Err(OperatorError::RowCountMismatch {
                expected: expected_rows,
                found: kernel.len(),
            });
        }
        for (row, r) in kernel.iter().enumerate() {
            if r.len() != group.order() {
                return Err(OperatorError::ColumnCountMismatch {
                    row,
                    expected: group.order(),
                    found: r.len(),
                });
            }
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(OperatorError::NonFinite { row, col });
            }
        }
        Ok(Self {
            group,
            kind,
            kernel,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.kernel.len()
    }

    pub fn kernel(&self) -> &[Vec<Complex64>] {
        &self.kernel
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.kernel[r]
    }

    /// Applies the operator: `out[r] = sum_x kernel[r][x] f[x]`.
    pub fn apply(&self, f: &Signal) -> Result<Vec<Complex64>, OperatorError> {
        if f.group() != &self.group {
            return Err(OperatorError::GroupMismatch {
                left: self.group.spec_string(),
                right: f.group().spec_string(),
            });
        }
        Ok(self
            .kernel
            .iter()
            .map(|row| row.iter().zip(f.values()).map(|(k, v)| k * v).sum())
            .collect())
    }
}

/// An operator on grid signals, one row per probed parameter value `y`:
/// `T_y(f)` is the trapezoidal sum of `kernel[y][i] * f[i]` over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceOperatorKernel {
    grid: HalfLineGrid,
    y_samples: Vec<f64>,
    kernel: Vec<Vec<Complex64>>,
}

impl LaplaceOperatorKernel {
    pub fn new(
        grid: HalfLineGrid,
        y_samples: Vec<f64>,
        kernel: Vec<Vec<Complex64>>,
    ) -> Result<Self, OperatorError> {
        if kernel.len() != y_samples.len() {
            return Err(OperatorError::RowCountMismatch {
                expected: y_samples.len(),
                found: kernel.len(),
            });
        }
        for (row, &y) in y_samples.iter().enumerate() {
            if !(y.is_finite() && y > 0.0) {
                return Err(OperatorError::NonPositiveSample { row, y });
            }
        }
        for (row, r) in kernel.iter().enumerate() {
            if r.len() != grid.count() {
                return Err(OperatorError::ColumnCountMismatch {
                    row,
                    expected: grid.count(),
                    found: r.len(),
                });
            }
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(OperatorError::NonFinite { row, col });
            }
        }
        Ok(Self {
            grid,
            y_samples,
            kernel,
        })
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    pub fn y_samples(&self) -> &[f64] {
        &self.y_samples
    }

    pub fn rows(&self) -> usize {
        self.kernel.len()
    }

    pub fn kernel(&self) -> &[Vec<Complex64>] {
        &self.kernel
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.kernel[r]
    }

    /// Applies one row as a functional: trapezoidal sum of
    /// `kernel[r][i] * values[i]`.
    pub fn apply_row(&self, r: usize, values: &[Complex64]) -> Result<Complex64, OperatorError> {
        let n = self.grid.count();
        if values.len() != n {
            return Err(OperatorError::ColumnCountMismatch {
                row: r,
                expected: n,
                found: values.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (k, v)) in self.kernel[r].iter().zip(values).enumerate() {
            let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += k * v * weight;
        }
        Ok(acc * self.grid.step())
    }
}

/// One row's relabeling target: the dual object the row factors through, or
/// the annihilation symbol for identically-zero rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ThetaTarget {
    /// `T(f)[row] = 0` for every input.
    Annihilated,
    /// Index into the canonical dual enumeration (Fourier kind).
    Dual { index: usize },
    /// Index into the canonical cosine-orbit enumeration (cosine kind).
    CosineOrbit { index: usize },
    /// Laplace exponent: the row acts as `f -> L(f)(z)`.
    Exponent { z: f64 },
}

/// The relabeling map theta: one target per operator row, in row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaAssignment(Vec<ThetaTarget>);

impl ThetaAssignment {
    pub fn new(targets: Vec<ThetaTarget>) -> Self {
        Self(targets)
    }

    pub fn targets(&self) -> &[ThetaTarget] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ThetaTarget> {
        self.0.iter()
    }
}

impl From<Vec<ThetaTarget>> for ThetaAssignment {
    fn from(targets: Vec<ThetaTarget>) -> Self {
        Self(targets)
    }
}

/// Validates a theta assignment against a finite-group operator shape.
pub(crate) fn validate_theta_finite(
    group: &FiniteAbelianGroup,
    kind: TransformKind,
    theta: &ThetaAssignment,
) -> Result<(), OperatorError> {
    let expected = kind.row_count(group);
    if theta.len() != expected {
        return Err(OperatorError::ThetaLengthMismatch {
            expected,
            found: theta.len(),
        });
    }
    for (row, target) in theta.iter().enumerate() {
        match (kind, target) {
            (_, ThetaTarget::Annihilated) => {}
            (TransformKind::Fourier, ThetaTarget::Dual { index }) => {
                if *index >= group.order() {
                    return Err(OperatorError::TargetOutOfRange {
                        row,
                        index: *index,
                        bound: group.order(),
                    });
                }
            }
            (TransformKind::Cosine, ThetaTarget::CosineOrbit { index }) => {
                let bound = group.cosine_class_size();
                if *index >= bound {
                    return Err(OperatorError::TargetOutOfRange {
                        row,
                        index: *index,
                        bound,
                    });
                }
            }
            _ => return Err(OperatorError::TargetKindMismatch { row }),
        }
    }
    Ok(())
}

/// Validates a theta assignment against a Laplace operator shape.
pub(crate) fn validate_theta_laplace(
    row_count: usize,
    theta: &ThetaAssignment,
) -> Result<(), OperatorError> {
    if theta.len() != row_count {
        return Err(OperatorError::ThetaLengthMismatch {
            expected: row_count,
            found: theta.len(),
        });
    }
    for (row, target) in theta.iter().enumerate() {
        match target {
            ThetaTarget::Annihilated => {}
            ThetaTarget::Exponent { z } => {
                if !(z.is_finite() && *z > 0.0) {
                    return Err(OperatorError::InvalidExponent { row, z: *z });
                }
            }
            _ => return Err(OperatorError::TargetKindMismatch { row }),
        }
    }
    Ok(())
}

/// Why an extraction (or one of its rows) was rejected. Each variant names
/// the proof stage that failed and carries the offending residual.
#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum ExtractionError {
    /// The operator fails the convolution property on the delta basis.
    #[error("operator is not multiplicative: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotMultiplicative { residual: f64, tol: f64 },
    /// The read-out chi does not have unit modulus.
    #[error("row {row}: |chi| deviates from 1 by {deviation:.3e}")]
    ModulusViolation { row: usize, deviation: f64 },
    /// The read-out chi fails its functional equation (character equation on
    /// the Fourier path; d'Alembert plus evenness on the cosine path).
    #[error("row {row}: functional-equation residual {residual:.3e} exceeds tolerance")]
    CharacterEquationViolation { row: usize, residual: f64 },
    /// No even witness with a usable normalizer exists for this row.
    #[error("row {row}: no even witness with a nonvanishing normalizer")]
    EvenWitnessNotFound { row: usize },
    /// No dual object matches chi decisively (best match too far, or the
    /// runner-up too close to call).
    #[error("row {row}: no decisive dual match (best distance {best:.3e})")]
    AmbiguousMatch {
        row: usize,
        best: f64,
        runner_up: Option<f64>,
    },
    /// The row is not the matched dual object's evaluation row.
    #[error("row {row}: factorization residual {residual:.3e} exceeds tolerance")]
    FactorizationViolation { row: usize, residual: f64 },
    /// The exponential functional equation fails on grid-aligned sums.
    #[error("row {row}: exponential equation residual {residual:.3e} exceeds tolerance")]
    FunctionalEquationViolation { row: usize, residual: f64 },
    /// A kernel value vanishes; one zero forces the whole row to zero, so a
    /// nonzero row containing a zero is inconsistent.
    #[error("row {row}: kernel value vanishes (min |k| = {min_abs:.3e})")]
    ZeroCrossing { row: usize, min_abs: f64 },
    /// The kernel row is not real and positive.
    #[error(
        "row {row}: kernel not real-positive (max imag {max_imag:.3e}, min real {min_real:.3e})"
    )]
    NonRealKernel {
        row: usize,
        max_imag: f64,
        min_real: f64,
    },
    /// The fitted exponent is not a positive real.
    #[error("row {row}: fitted exponent {z} is not positive")]
    NonPositiveExponent { row: usize, z: f64 },
    /// The log-linear fit does not explain the row within tolerance.
    #[error(
        "row {row}: exponential fit rejected (max residual {residual:.3e}, intercept {intercept:.3e})"
    )]
    FitResidualTooLarge {
        row: usize,
        residual: f64,
        intercept: f64,
    },
}

/// Outcome of one row's extraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowOutcome {
    Assigned { target: ThetaTarget },
    Failed { error: ExtractionError },
}

/// Per-row diagnostics mirroring the proof stages. Fields not applicable to
/// a path (or not reached before a failure) are absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub row: usize,
    #[serde(flatten)]
    pub outcome: RowOutcome,
    /// Canonical index of the pivot element realizing the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    /// `max_x | |chi(x)| - 1 |` (Fourier path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus_deviation: Option<f64>,
    /// Residual of chi's functional equation (character / d'Alembert /
    /// exponential, by path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation_residual: Option<f64>,
    /// Distance from chi to the matched dual object.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_distance: Option<f64>,
    /// Distance to the second-best dual object; absent when there is none.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runner_up_distance: Option<f64>,
    /// Intercept of the log-linear exponent fit (Laplace path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intercept: Option<f64>,
    /// Max residual of the log-linear exponent fit (Laplace path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_residual: Option<f64>,
    /// Residual of the final factorization check for this row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization_residual: Option<f64>,
}

/// Mutable scratchpad for the diagnostics a row extraction accumulates
/// while walking the proof stages; turned into a [`RowReport`] once the
/// outcome is known.
#[derive(Debug, Default)]
pub(crate) struct RowDiagnostics {
    pub pivot: Option<usize>,
    pub modulus_deviation: Option<f64>,
    pub equation_residual: Option<f64>,
    pub match_distance: Option<f64>,
    pub runner_up_distance: Option<f64>,
    pub intercept: Option<f64>,
    pub fit_residual: Option<f64>,
    pub factorization_residual: Option<f64>,
}

impl RowDiagnostics {
    pub(crate) fn into_report(
        self,
        row: usize,
        result: Result<ThetaTarget, ExtractionError>,
    ) -> RowReport {
        let outcome = match result {
            Ok(target) => RowOutcome::Assigned { target },
            Err(error) => RowOutcome::Failed { error },
        };
        RowReport {
            row,
            outcome,
            pivot: self.pivot,
            modulus_deviation: self.modulus_deviation,
            equation_residual: self.equation_residual,
            match_distance: self.match_distance,
            runner_up_distance: self.runner_up_distance,
            intercept: self.intercept,
            fit_residual: self.fit_residual,
            factorization_residual: self.factorization_residual,
        }
    }
}

impl RowReport {
    pub fn is_assigned(&self) -> bool {
        matches!(self.outcome, RowOutcome::Assigned { .. })
    }

    pub fn target(&self) -> Option<ThetaTarget> {
        match &self.outcome {
            RowOutcome::Assigned { target } => Some(*target),
            RowOutcome::Failed { .. } => None,
        }
    }

    pub fn error(&self) -> Option<&ExtractionError> {
        match &self.outcome {
            RowOutcome::Assigned { .. } => None,
            RowOutcome::Failed { error } => Some(error),
        }
    }
}

/// Full result of an extraction: the recovered theta (when every row
/// succeeded), per-row diagnostics, and the first failure otherwise. The
/// report is produced even on failure paths so the failing stage is always
/// visible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    pub kind: OperatorKind,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_tolerance: Option<f64>,
    /// Residual of the delta-basis multiplicativity check; absent on the
    /// Laplace path, where the equation is checked row-wise instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicativity_residual: Option<f64>,
    pub rows: Vec<RowReport>,
    /// The recovered assignment; present only when extraction fully
    /// succeeded.
    pub theta: Option<ThetaAssignment>,
    /// The overall failure: the multiplicativity precondition if it failed,
    /// otherwise the first failing row's error.
    pub error: Option<ExtractionError>,
}

impl ExtractionReport {
    pub fn is_success(&self) -> bool {
        self.error.is_none()
    }
}

/// Assembles a report from row results plus the global precondition result.
pub(crate) fn assemble_report(
    kind: OperatorKind,
    tolerance: f64,
    fit_tolerance: Option<f64>,
    multiplicativity_residual: Option<f64>,
    precondition_error: Option<ExtractionError>,
    rows: Vec<RowReport>,
) -> ExtractionReport {
    let first_row_error = rows.iter().find_map(|r| r.error().cloned());
    let error = precondition_error.or(first_row_error);
    let theta = if error.is_none() {
        Some(ThetaAssignment::new(
            rows.iter()
                .map(|r| r.target().expect("no error implies every row assigned"))
                .collect(),
        ))
    } else {
        None
    };
    ExtractionReport {
        kind,
        tolerance,
        fit_tolerance,
        multiplicativity_residual,
        rows,
        theta,
        error,
    }
}

/// Residual of the convolution property on the delta basis:
///
/// * Fourier kind: `max |k[r][x] k[r][y] - k[r][x+y]|`, since
///   `delta_x * delta_y = delta_{x+y}`;
/// * cosine kind: `max |k[r][x] k[r][y] - (k[r][y-x] + k[r][y+x]) / 2|`,
///   since `delta_x *_c delta_y = (delta_{y-x} + delta_{y+x}) / 2`.
///
/// By bilinearity the delta basis decides the property for all signals, so
/// a residual at round-off scale certifies multiplicativity outright.
pub fn check_multiplicativity(op: &MultiplicativeOperator) -> f64 {
    let group = op.group();
    let n = group.order();
    op.kernel()
        .par_iter()
        .map(|row| {
            let mut worst = 0.0f64;
            for x in 0..n {
                for y in 0..n {
                    let product = row[x] * row[y];
                    let image = match op.kind() {
                        TransformKind::Fourier => row[group.add_indices(x, y)],
                        TransformKind::Cosine => {
                            (row[group.sub_indices(y, x)] + row[group.add_indices(y, x)]) / 2.0
                        }
                    };
                    worst = worst.max((product - image).norm());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Checks `T = transform . theta` on `trials` random signals: applies the
/// kernel and compares against the true transform evaluated at each row's
/// target (zero for annihilated rows). Returns the max pointwise residual.
pub fn verify_factorization(
    op: &MultiplicativeOperator,
    theta: &ThetaAssignment,
    trials: usize,
    seed: u64,
) -> Result<f64, OperatorError> {
    validate_theta_finite(op.group(), op.kind(), theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = Signal::random_with(op.group().clone(), &mut rng);
        let applied = op.apply(&f)?;
        let spectrum = match op.kind() {
            TransformKind::Fourier => fourier_transform(&f),
            TransformKind::Cosine => cosine_transform(&f),
        };
        for (out, target) in applied.iter().zip(theta.iter()) {
            let expected = match target {
                ThetaTarget::Annihilated => Complex64::new(0.0, 0.0),
                ThetaTarget::Dual { index } | ThetaTarget::CosineOrbit { index } => {
                    spectrum.at(*index)
                }
                ThetaTarget::Exponent { .. } => unreachable!("validated against finite kind"),
            };
            worst = worst.max((out - expected).norm());
        }
    }
    Ok(worst)
}

/// Distance between two dual objects' evaluation rows, used by the matching
/// stage: `max_x |a(x) - b(x)|`.
pub(crate) fn row_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Finds the best and runner-up matches of `chi` in a dictionary of
/// candidate rows: returns `(best_index, best_distance, runner_up_distance)`
/// with first-index tie-breaking.
pub(crate) fn best_match(
    chi: &[Complex64],
    dictionary: &[Vec<Complex64>],
) -> (usize, f64, Option<f64>) {
    let mut best_index = 0;
    let mut best = f64::INFINITY;
    let mut runner_up: Option<f64> = None;
    for (i, candidate) in dictionary.iter().enumerate() {
        let d = row_distance(chi, candidate);
        if d < best {
            if best.is_finite() {
                runner_up = Some(best);
            }
            best = d;
            best_index = i;
        } else if runner_up.is_none_or(|r| d < r) {
            runner_up = Some(d);
        }
    }
    (best_index, best, runner_up)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::build_from_theta;

    fn g(spec: &str) -> FiniteAbelianGroup {
        spec.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity_theta(group: &FiniteAbelianGroup, kind: TransformKind) -> ThetaAssignment {
        let make = |i| match kind {
            TransformKind::Fourier => ThetaTarget::Dual { index: i },
            TransformKind::Cosine => ThetaTarget::CosineOrbit { index: i },
        };
        ThetaAssignment::new((0..kind.row_count(group)).map(make).collect())
    }

    #[test]
    fn operator_shape_validation() {
        let z4 = g("4");
        let ok = MultiplicativeOperator::new(
            z4.clone(),
            TransformKind::Cosine,
            vec![vec![c(0.0, 0.0); 4]; 3],
        );
        assert!(ok.is_ok());
        assert!(matches!(
            MultiplicativeOperator::new(
                z4.clone(),
                TransformKind::Cosine,
                vec![vec![c(0.0, 0.0); 4]; 4],
            ),
            Err(OperatorError::RowCountMismatch {
                expected: 3,
                found: 4
            })
        ));
        assert!(matches!(
            MultiplicativeOperator::new(
                z4.clone(),
                TransformKind::Fourier,
                vec![vec![c(0.0, 0.0); 3]; 4],
            ),
            Err(OperatorError::ColumnCountMismatch { row: 0, .. })
        ));
        let mut bad = vec![vec![c(0.0, 0.0); 4]; 4];
        bad[2][1] = c(f64::NAN, 0.0);
        assert!(matches!(
            MultiplicativeOperator::new(z4, TransformKind::Fourier, bad),
            Err(OperatorError::NonFinite { row: 2, col: 1 })
        ));
    }

    #[test]
    fn apply_matches_direct_sum() {
        let z3 = g("3");
        let op = build_from_theta(
            &z3,
            TransformKind::Fourier,
            &identity_theta(&z3, TransformKind::Fourier),
        )
        .unwrap();
        let f = Signal::random(z3.clone(), 9);
        let applied = op.apply(&f).unwrap();
        let spectrum = fourier_transform(&f);
        for (d, out) in applied.iter().enumerate() {
            assert!((out - spectrum.at(d)).norm() < 1e-12);
        }
    }

    #[test]
    fn true_fourier_kernel_is_multiplicative() {
        for spec in ["8", "4x3", "2x2"] {
            let grp = g(spec);
            let theta = identity_theta(&grp, TransformKind::Fourier);
            let op = build_from_theta(&grp, TransformKind::Fourier, &theta).unwrap();
            assert!(check_multiplicativity(&op) <= 1e-12, "group {spec}");
        }
    }

    #[test]
    fn true_cosine_kernel_is_multiplicative() {
        for spec in ["5", "8", "4x3"] {
            let grp = g(spec);
            let theta = identity_theta(&grp, TransformKind::Cosine);
            let op = build_from_theta(&grp, TransformKind::Cosine, &theta).unwrap();
            assert!(check_multiplicativity(&op) <= 1e-12, "group {spec}");
        }
    }

    #[test]
    fn zero_kernel_is_multiplicative() {
        let z4 = g("4");
        let op =
            MultiplicativeOperator::new(z4, TransformKind::Fourier, vec![vec![c(0.0, 0.0); 4]; 4])
                .unwrap();
        assert_eq!(check_multiplicativity(&op), 0.0);
    }

    #[test]
    fn random_dense_kernel_is_far_from_multiplicative() {
        // Pinned seed; a dense random kernel has no reason to satisfy the
        // delta-basis equation anywhere near tolerance.
        let z6 = g("6");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let kernel: Vec<Vec<Complex64>> = (0..6)
            .map(|_| Signal::random_with(z6.clone(), &mut rng).values().to_vec())
            .collect();
        let op = MultiplicativeOperator::new(z6, TransformKind::Fourier, kernel).unwrap();
        assert!(check_multiplicativity(&op) > 0.1);
    }

    #[test]
    fn theta_validation_catches_shape_errors() {
        let z4 = g("4");
        let short = ThetaAssignment::new(vec![ThetaTarget::Annihilated; 3]);
        assert!(matches!(
            validate_theta_finite(&z4, TransformKind::Fourier, &short),
            Err(OperatorError::ThetaLengthMismatch {
                expected: 4,
                found: 3
            })
        ));
        let wrong_kind = ThetaAssignment::new(vec![
            ThetaTarget::CosineOrbit { index: 0 },
            ThetaTarget::Annihilated,
            ThetaTarget::Annihilated,
            ThetaTarget::Annihilated,
        ]);
        assert!(matches!(
            validate_theta_finite(&z4, TransformKind::Fourier, &wrong_kind),
            Err(OperatorError::TargetKindMismatch { row: 0 })
        ));
        let out_of_range = ThetaAssignment::new(vec![
            ThetaTarget::Dual { index: 4 },
            ThetaTarget::Annihilated,
            ThetaTarget::Annihilated,
            ThetaTarget::Annihilated,
        ]);
        assert!(matches!(
            validate_theta_finite(&z4, TransformKind::Fourier, &out_of_range),
            Err(OperatorError::TargetOutOfRange {
                row: 0,
                index: 4,
                bound: 4
            })
        ));
        let laplace_bad = ThetaAssignment::new(vec![ThetaTarget::Exponent { z: -2.0 }]);
        assert!(matches!(
            validate_theta_laplace(1, &laplace_bad),
            Err(OperatorError::InvalidExponent { row: 0, .. })
        ));
    }

    #[test]
    fn verify_factorization_accepts_true_theta() {
        let grp = g("2x3");
        let theta = identity_theta(&grp, TransformKind::Fourier);
        let op = build_from_theta(&grp, TransformKind::Fourier, &theta).unwrap();
        let r = verify_factorization(&op, &theta, 20, 1).unwrap();
        assert!(r <= 1e-10, "residual {r:.3e}");
    }

    #[test]
    fn verify_factorization_rejects_swapped_theta() {
        // Swap two rows of the claimed assignment; the mismatch shows up on
        // random inputs immediately.
        let grp = g("5");
        let theta = identity_theta(&grp, TransformKind::Fourier);
        let op = build_from_theta(&grp, TransformKind::Fourier, &theta).unwrap();
        let mut wrong = theta.targets().to_vec();
        wrong.swap(1, 2);
        let r = verify_factorization(&op, &ThetaAssignment::new(wrong), 5, 7).unwrap();
        assert!(r > 0.1, "residual {r:.3e}");
    }

    #[test]
    fn verify_factorization_zero_operator() {
        let z4 = g("4");
        let op =
            MultiplicativeOperator::new(z4, TransformKind::Fourier, vec![vec![c(0.0, 0.0); 4]; 4])
                .unwrap();
        let theta = ThetaAssignment::new(vec![ThetaTarget::Annihilated; 4]);
        assert_eq!(verify_factorization(&op, &theta, 10, 3).unwrap(), 0.0);
    }

    #[test]
    fn best_match_reports_runner_up() {
        let dict = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(-1.0, 0.0)],
        ];
        let (i, best, runner) = best_match(&[c(1.0, 0.0), c(-1.0, 0.0)], &dict);
        assert_eq!(i, 1);
        assert_eq!(best, 0.0);
        assert_eq!(runner, Some(2.0));
        let (_, _, none) = best_match(&[c(1.0, 0.0), c(-1.0, 0.0)], &dict[1..]);
        assert!(none.is_none());
    }
}
