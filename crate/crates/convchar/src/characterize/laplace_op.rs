//! Extraction of theta for operators on the discretized half line.
//!
//! Each kernel row is a candidate `chi(u)`; the multiplicative structure is
//! the exponential functional equation `chi(u + v) = chi(u) chi(v)` on
//! grid-aligned sums. A row that passes it, avoids zeros, and is real and
//! positive must be `e^{-z u}`; the exponent is recovered by a log-linear
//! least-squares fit and the row is finally checked to act like the
//! transform evaluated at `z` on the built-in test functions.

use rayon::prelude::*;

use super::{
    assemble_report, ExtractionError, ExtractionReport, LaplaceOperatorKernel, OperatorKind,
    RowDiagnostics, RowReport, ThetaTarget,
};
use crate::laplace::{laplace_transform, TestFunction};

/// Values at or below this are treated as genuine zeros: a multiplicative
/// function with one zero is identically zero, so a nonzero row containing
/// one is inconsistent, and a log fit through it is meaningless anyway.
/// The threshold sits far below any representable decay across a sane grid
/// (it flags only exact zeros and exponent underflow), so legitimately
/// steep exponentials are not misclassified.
const ZERO_GUARD: f64 = 1e-300;

/// Recovers the exponent assignment of a Laplace-side operator kernel.
///
/// `tol_eq` governs the functional-equation and realness checks on raw
/// kernel values; `tol_fit` governs the log-domain fit and the final
/// verification against the built-in test functions.
pub fn extract_theta_laplace(
    kernel: &LaplaceOperatorKernel,
    tol_eq: f64,
    tol_fit: f64,
) -> ExtractionReport {
    let rows: Vec<RowReport> = (0..kernel.rows())
        .into_par_iter()
        .map(|row| extract_row(kernel, row, tol_eq, tol_fit))
        .collect();
    assemble_report(
        OperatorKind::Laplace,
        tol_eq,
        Some(tol_fit),
        None,
        None,
        rows,
    )
}

fn extract_row(kernel: &LaplaceOperatorKernel, row: usize, tol_eq: f64, tol_fit: f64) -> RowReport {
    let grid = kernel.grid();
    let n = grid.count();
    let k = kernel.row(row);
    let mut diag = RowDiagnostics::default();

    let result = (|| {
        // Stage (a): annihilated rows.
        let max_abs = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max_abs <= tol_eq {
            return Ok(ThetaTarget::Annihilated);
        }

        // Stage (b): exponential functional equation on grid-aligned sums.
        let mut equation_residual = 0.0f64;
        for i in 0..n {
            for j in i..n - i {
                let defect = (k[i + j] - k[i] * k[j]).norm();
                equation_residual = equation_residual.max(defect);
            }
        }
        diag.equation_residual = Some(equation_residual);
        if equation_residual > tol_eq {
            return Err(ExtractionError::FunctionalEquationViolation {
                row,
                residual: equation_residual,
            });
        }

        // Stage (c): no zeros. A zero value would force the whole row to
        // zero through the functional equation, so only exact zeros and
        // underflow are flagged; legitimate steep decay passes.
        let min_abs = k.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if min_abs <= ZERO_GUARD {
            return Err(ExtractionError::ZeroCrossing { row, min_abs });
        }

        // Stage (d): real and positive values.
        let max_imag = k.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        let min_real = k.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        if max_imag > tol_eq || min_real <= 0.0 {
            return Err(ExtractionError::NonRealKernel {
                row,
                max_imag,
                min_real,
            });
        }

        // Stage (e): least-squares fit of -log k against the nodes, with an
        // intercept (chi(0) = 1 means the intercept must vanish).
        let w: Vec<f64> = k.iter().map(|v| -v.re.ln()).collect();
        let u_mean = grid.nodes().sum::<f64>() / n as f64;
        let w_mean = w.iter().sum::<f64>() / n as f64;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (i, &wi) in w.iter().enumerate() {
            let du = grid.node(i) - u_mean;
            sxx += du * du;
            sxy += du * (wi - w_mean);
        }
        let z = sxy / sxx;
        let intercept = w_mean - z * u_mean;
        let fit_residual = w
            .iter()
            .enumerate()
            .map(|(i, &wi)| (wi - (z * grid.node(i) + intercept)).abs())
            .fold(0.0, f64::max);
        diag.intercept = Some(intercept);
        diag.fit_residual = Some(fit_residual);
        if !(z.is_finite() && z > 0.0) {
            return Err(ExtractionError::NonPositiveExponent { row, z });
        }
        if intercept.abs() > tol_fit || fit_residual > tol_fit {
            return Err(ExtractionError::FitResidualTooLarge {
                row,
                residual: fit_residual,
                intercept,
            });
        }

        // Stage (f): the row must act as the transform evaluated at z on
        // the built-in test functions.
        let mut factorization_residual = 0.0f64;
        for f in TestFunction::ALL {
            let fs = f.sample(grid.clone());
            let applied = kernel
                .apply_row(row, fs.values())
                .expect("kernel and sample share the grid");
            let expected = laplace_transform(&fs, z).expect("fitted exponent is positive");
            factorization_residual = factorization_residual.max((applied - expected).norm());
        }
        diag.factorization_residual = Some(factorization_residual);
        if factorization_residual > tol_fit {
            return Err(ExtractionError::FactorizationViolation {
                row,
                residual: factorization_residual,
            });
        }

        Ok(ThetaTarget::Exponent { z })
    })();

    diag.into_report(row, result)
}
