//! Constructing operators with a prescribed relabeling map, and controlled
//! corruptions of them.
//!
//! The builders run the characterization in reverse: given a theta, emit the
//! kernel whose rows are the corresponding dual evaluations (Fourier rows
//! are conjugated characters, cosine rows are orbit functions, Laplace rows
//! are decaying exponentials). Building then extracting is the identity on
//! theta, and every built kernel passes the multiplicativity check at
//! round-off scale; the perturbation helper exists to break exactly that.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characterize::{
    validate_theta_finite, validate_theta_laplace, LaplaceOperatorKernel, MultiplicativeOperator,
    OperatorError, ThetaAssignment, ThetaTarget, TransformKind,
};
use crate::group::FiniteAbelianGroup;
use crate::laplace::HalfLineGrid;

/// Builds the finite-group operator realizing `theta`: row `r` is the
/// evaluation row of `theta[r]`'s dual object (zero for annihilated rows).
pub fn build_from_theta(
    group: &FiniteAbelianGroup,
    kind: TransformKind,
    theta: &ThetaAssignment,
) -> Result<MultiplicativeOperator, OperatorError> {
    validate_theta_finite(group, kind, theta)?;
    let n = group.order();
    let reps = group.cosine_orbit_reps();
    let kernel = theta
        .iter()
        .map(|target| match target {
            ThetaTarget::Annihilated => vec![Complex64::new(0.0, 0.0); n],
            ThetaTarget::Dual { index } => (0..n)
                .map(|x| group.char_eval_indices(*index, x).conj())
                .collect(),
            ThetaTarget::CosineOrbit { index } => (0..n)
                .map(|x| Complex64::new(group.cosine_eval_rep_index(reps[*index], x), 0.0))
                .collect(),
            ThetaTarget::Exponent { .. } => unreachable!("validated against the finite kind"),
        })
        .collect();
    MultiplicativeOperator::new(group.clone(), kind, kernel)
}

/// Builds the Laplace-side kernel realizing `theta` over the given probe
/// values: row `r` is `u -> e^{-z_r u}` sampled on the grid (zero for
/// annihilated rows).
pub fn build_laplace_from_exponents(
    grid: HalfLineGrid,
    y_samples: Vec<f64>,
    theta: &ThetaAssignment,
) -> Result<LaplaceOperatorKernel, OperatorError> {
    validate_theta_laplace(y_samples.len(), theta)?;
    let kernel = theta
        .iter()
        .map(|target| match target {
            ThetaTarget::Annihilated => vec![Complex64::new(0.0, 0.0); grid.count()],
            ThetaTarget::Exponent { z } => grid
                .nodes()
                .map(|u| Complex64::new((-z * u).exp(), 0.0))
                .collect(),
            _ => unreachable!("validated against the Laplace kind"),
        })
        .collect();
    LaplaceOperatorKernel::new(grid, y_samples, kernel)
}

/// Adds independent uniform noise to every kernel entry. Real and imaginary
/// parts are drawn from `[-eps/sqrt(2), eps/sqrt(2)]`, so each entry moves
/// by at most `eps` in modulus. Deterministic in `seed`.
pub fn perturb(
    op: &MultiplicativeOperator,
    epsilon: f64,
    seed: u64,
) -> Result<MultiplicativeOperator, OperatorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = epsilon / std::f64::consts::SQRT_2;
    let kernel = op
        .kernel()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v + Complex64::new(rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp)))
                .collect()
        })
        .collect();
    MultiplicativeOperator::new(op.group().clone(), op.kind(), kernel)
}

/// Shape of a randomly drawn theta assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaShape {
    /// A bijection: every dual object used exactly once.
    Permutation,
    /// Targets drawn with replacement, with a collision forced so the map is
    /// genuinely non-injective (degenerates to a single random target on
    /// one-row operators).
    NonInjective,
    /// Random targets with at least one annihilated row.
    WithAnnihilated,
}

/// Draws a random theta of the requested shape. Deterministic in `seed`.
pub fn random_theta(
    group: &FiniteAbelianGroup,
    kind: TransformKind,
    shape: ThetaShape,
    seed: u64,
) -> ThetaAssignment {
    let n = kind.row_count(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let make = |i: usize| match kind {
        TransformKind::Fourier => ThetaTarget::Dual { index: i },
        TransformKind::Cosine => ThetaTarget::CosineOrbit { index: i },
    };
    let targets = match shape {
        ThetaShape::Permutation => {
            let mut indices: Vec<usize> = (0..n).collect();
            indices.shuffle(&mut rng);
            indices.into_iter().map(make).collect()
        }
        ThetaShape::NonInjective => {
            let mut indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            if n >= 2 {
                indices[1] = indices[0];
            }
            indices.into_iter().map(make).collect()
        }
        ThetaShape::WithAnnihilated => {
            let mut targets: Vec<ThetaTarget> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        ThetaTarget::Annihilated
                    } else {
                        make(rng.gen_range(0..n))
                    }
                })
                .collect();
            if !targets.contains(&ThetaTarget::Annihilated) {
                let at = rng.gen_range(0..n);
                targets[at] = ThetaTarget::Annihilated;
            }
            targets
        }
    };
    ThetaAssignment::new(targets)
}
