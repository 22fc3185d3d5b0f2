//! Extraction of theta for operators respecting the cosine convolution.
//!
//! The witness here must be even: `g_* = (delta_{x0} + delta_{-x0}) / c`
//! with normalizer `c = k[x0] + k[-x0]`, so that `T_row(g_*) = 1`. The
//! read-out `chi(x) = T_row(L_x g_*)` (no conjugate) is then checked against
//! the d'Alembert equation and evenness, and matched to a cosine orbit.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    assemble_report, best_match, check_multiplicativity, row_distance, ExtractionError,
    ExtractionReport, MultiplicativeOperator, OperatorKind, RowDiagnostics, RowReport, ThetaTarget,
    TransformKind,
};

/// Recovers the relabeling map of a cosine-kind operator, or reports which
/// proof stage rejected it. Precondition handling matches the Fourier path:
/// a multiplicativity failure is the overall error, with per-row diagnostics
/// still reported.
pub fn extract_theta_cosine(op: &MultiplicativeOperator, tol: f64) -> ExtractionReport {
    assert_eq!(
        op.kind(),
        TransformKind::Cosine,
        "operator kind must be cosine"
    );
    let residual = check_multiplicativity(op);
    let precondition_error =
        (residual > tol).then_some(ExtractionError::NotMultiplicative { residual, tol });
    let dictionary = cosine_rows(op);
    let rows: Vec<RowReport> = (0..op.rows())
        .into_par_iter()
        .map(|row| extract_row(op, &dictionary, row, tol, None))
        .collect();
    assemble_report(
        OperatorKind::Cosine,
        tol,
        None,
        Some(residual),
        precondition_error,
        rows,
    )
}

/// Extracts a single row, optionally forcing the pivot choice.
///
/// The forced pivot is tried first; if its even normalizer `k[p] + k[-p]`
/// does not clear the tolerance, the automatic descending-modulus search
/// takes over — the same fallback the unforced path uses when the
/// max-modulus pivot happens to have a vanishing normalizer.
pub fn extract_cosine_row(
    op: &MultiplicativeOperator,
    row: usize,
    tol: f64,
    forced_pivot: Option<usize>,
) -> RowReport {
    assert_eq!(
        op.kind(),
        TransformKind::Cosine,
        "operator kind must be cosine"
    );
    let dictionary = cosine_rows(op);
    extract_row(op, &dictionary, row, tol, forced_pivot)
}

/// The matching dictionary: row `o` is the evaluation of the `o`-th cosine
/// orbit, which is what a kernel row factoring through that orbit equals.
fn cosine_rows(op: &MultiplicativeOperator) -> Vec<Vec<Complex64>> {
    let group = op.group();
    let n = group.order();
    group
        .cosine_orbit_reps()
        .into_iter()
        .map(|rep| {
            (0..n)
                .map(|x| Complex64::new(group.cosine_eval_rep_index(rep, x), 0.0))
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

        // Stage (b): even witness. Try pivots by descending |k| (ties by
        // ascending index), forced pivot first if any, until the normalizer
        // c = k[x0] + k[-x0] is usable. For a multiplicative row the very
        // first candidate already works; the loop is the guaranteed-existence
        // fallback.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            k[b].norm()
                .partial_cmp(&k[a].norm())
                .expect("finite kernel")
                .then(a.cmp(&b))
        });
        let candidates = forced_pivot.into_iter().chain(order);
        let mut chosen = None;
        for x0 in candidates {
            let c = k[x0] + k[group.neg_index(x0)];
            if c.norm() > tol {
                chosen = Some((x0, c));
                break;
            }
        }
        let Some((pivot, normalizer)) = chosen else {
            return Err(ExtractionError::EvenWitnessNotFound { row });
        };
        diag.pivot = Some(pivot);

        // Stage (c): chi(x) = T_row(L_x g_*) = (k[x0+x] + k[-x0+x]) / c.
        let neg_pivot = group.neg_index(pivot);
        let chi: Vec<Complex64> = (0..n)
            .map(|x| {
                (k[group.add_indices(pivot, x)] + k[group.add_indices(neg_pivot, x)]) / normalizer
            })
            .collect();

        // Stage (d): d'Alembert equation and evenness of chi.
        let mut equation_residual = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                let lhs = chi[x] * chi[y];
                let rhs = (chi[group.add_indices(x, y)] + chi[group.sub_indices(x, y)]) / 2.0;
                equation_residual = equation_residual.max((lhs - rhs).norm());
            }
        }
        for y in 0..n {
            let defect = (chi[y] - (chi[y] + chi[group.neg_index(y)]) / 2.0).norm();
            equation_residual = equation_residual.max(defect);
        }
        diag.equation_residual = Some(equation_residual);
        if equation_residual > tol {
            return Err(ExtractionError::CharacterEquationViolation {
                row,
                residual: equation_residual,
            });
        }

        // Stage (e): identify chi among the cosine orbits.
        let (index, best, runner_up) = best_match(&chi, dictionary);
        diag.match_distance = Some(best);
        diag.runner_up_distance = runner_up;
        if best > tol || runner_up.is_some_and(|r| r < 10.0 * tol) {
            return Err(ExtractionError::AmbiguousMatch {
                row,
                best,
                runner_up,
            });
        }

        // Stage (f): the row must be the matched orbit's evaluation row.
        let factorization_residual = row_distance(k, &dictionary[index]);
        diag.factorization_residual = Some(factorization_residual);
        if factorization_residual > tol {
            return Err(ExtractionError::FactorizationViolation {
                row,
                residual: factorization_residual,
            });
        }

        Ok(ThetaTarget::CosineOrbit { index })
    })();

    diag.into_report(row, result)
}
