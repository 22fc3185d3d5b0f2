//! Extraction of theta for operators respecting the group convolution.
//!
//! Per row, the constructive argument realizes a witness `g_* =
//! delta_{x0} / k[x0]` with `T_row(g_*) = 1`, reads off `chi(x) =
//! conj(T_row(L_x g_*))` as a scaled, shifted copy of the kernel row, checks
//! that chi is a unit-modulus character, and identifies it in the dual
//! enumeration.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    assemble_report, best_match, check_multiplicativity, row_distance, ExtractionError,
    ExtractionReport, MultiplicativeOperator, OperatorKind, RowDiagnostics, RowReport, ThetaTarget,
    TransformKind,
};

/// Recovers the relabeling map of a Fourier-kind operator, or reports which
/// proof stage rejected it.
///
/// The multiplicativity precondition is enforced: when the delta-basis
/// residual exceeds `tol`, the overall error is `NotMultiplicative`. Rows
/// are still processed individually so the report shows where each one
/// breaks down.
pub fn extract_theta_fourier(op: &MultiplicativeOperator, tol: f64) -> ExtractionReport {
    assert_eq!(
        op.kind(),
        TransformKind::Fourier,
        "operator kind must be fourier"
    );
    let residual = check_multiplicativity(op);
    let precondition_error =
        (residual > tol).then_some(ExtractionError::NotMultiplicative { residual, tol });
    let dictionary = conjugate_character_rows(op);
    let rows: Vec<RowReport> = (0..op.rows())
        .into_par_iter()
        .map(|row| extract_row(op, &dictionary, row, tol, None))
        .collect();
    assemble_report(
        OperatorKind::Fourier,
        tol,
        None,
        Some(residual),
        precondition_error,
        rows,
    )
}

/// Extracts a single row, optionally forcing the pivot choice.
///
/// A forced pivot is used if its kernel value clears the annihilation
/// tolerance; otherwise the automatic rule (max modulus, smallest index on
/// ties) applies. Under multiplicativity every valid pivot yields the same
/// chi, which is exactly what the pivot-independence tests assert.
pub fn extract_fourier_row(
    op: &MultiplicativeOperator,
    row: usize,
    tol: f64,
    forced_pivot: Option<usize>,
) -> RowReport {
    assert_eq!(
        op.kind(),
        TransformKind::Fourier,
        "operator kind must be fourier"
    );
    let dictionary = conjugate_character_rows(op);
    extract_row(op, &dictionary, row, tol, forced_pivot)
}

/// The matching dictionary: row `d` is `x -> conj(chi_d(x))`, i.e. exactly
/// what a kernel row factoring through dual `d` must equal.
fn conjugate_character_rows(op: &MultiplicativeOperator) -> Vec<Vec<Complex64>> {
    let group = op.group();
    let n = group.order();
    (0..n)
        .map(|d| {
            (0..n)
                .map(|x| group.char_eval_indices(d, x).conj())
                .collect()
        })
        .collect()
}

fn extract_row(
    op: &MultiplicativeOperator,
    dictionary: &[Vec<Complex64>],
    row: usize,
    tol: f64,
    forced_pivot: Option<usize>,
) -> RowReport {
    let group = op.group();
    let n = group.order();
    let k = op.row(row);
    let mut diag = RowDiagnostics::default();

    let result = (|| {
        // Stage (a): annihilated rows.
        let max_abs = k.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max_abs <= tol {
            return Ok(ThetaTarget::Annihilated);
        }

        // Stage (b): pivot with T_row(g_*) = 1 for g_* = delta_{x0} / k[x0].
        // The automatic rule is max modulus with smallest index on ties
        // (strict inequality keeps the first maximum); a forced pivot is
        // honored when it clears the annihilation tolerance.
        let mut auto_pivot = 0;
        for x in 1..n {
            if k[x].norm() > k[auto_pivot].norm() {
                auto_pivot = x;
            }
        }
        let pivot = match forced_pivot {
            Some(p) if k[p].norm() > tol => p,
            _ => auto_pivot,
        };
        diag.pivot = Some(pivot);

        // Stage (c): chi(x) = conj(T_row(L_x g_*)) = conj(k[x0 + x] / k[x0]).
        let chi: Vec<Complex64> = (0..n)
            .map(|x| (k[group.add_indices(pivot, x)] / k[pivot]).conj())
            .collect();

        // Stage (d): unit modulus, then the character equation.
        let modulus_deviation = chi
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        diag.modulus_deviation = Some(modulus_deviation);
        if modulus_deviation > tol {
            return Err(ExtractionError::ModulusViolation {
                row,
                deviation: modulus_deviation,
            });
        }

        let mut equation_residual = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                let defect = (chi[x] * chi[y] - chi[group.add_indices(x, y)]).norm();
                equation_residual = equation_residual.max(defect);
            }
        }
        diag.equation_residual = Some(equation_residual);
        if equation_residual > tol {
            return Err(ExtractionError::CharacterEquationViolation {
                row,
                residual: equation_residual,
            });
        }

        // Stage (e): identify chi in the dual enumeration. The dictionary
        // holds conjugated rows, so compare conj(chi) against it.
        let chi_conj: Vec<Complex64> = chi.iter().map(|v| v.conj()).collect();
        let (index, best, runner_up) = best_match(&chi_conj, dictionary);
        diag.match_distance = Some(best);
        diag.runner_up_distance = runner_up;
        if best > tol || runner_up.is_some_and(|r| r < 10.0 * tol) {
            return Err(ExtractionError::AmbiguousMatch {
                row,
                best,
                runner_up,
            });
        }

        // Stage (f): the row itself must be the matched character's
        // conjugate evaluation row — the factorization on the delta basis.
        let factorization_residual = row_distance(k, &dictionary[index]);
        diag.factorization_residual = Some(factorization_residual);
        if factorization_residual > tol {
            return Err(ExtractionError::FactorizationViolation {
                row,
                residual: factorization_residual,
            });
        }

        Ok(ThetaTarget::Dual { index })
    })();

    diag.into_report(row, result)
}
