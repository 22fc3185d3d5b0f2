//! The Fourier and cosine transforms on a finite abelian group, the
//! convolutions they turn into pointwise products, and the two translation
//! identities that drive the extraction algorithms.
//!
//! Everything is computed by dense summation against the counting measure;
//! no fast-transform trickery, since the groups of interest are small and
//! the point is numerical transparency.

use num_complex::Complex64;
use thiserror::Error;

use crate::group::FiniteAbelianGroup;
use crate::signal::{Signal, SignalError, Spectrum, SpectrumBasis};

/// Evenness slack accepted by the cosine-side identity checks. The cosine
/// convolution itself is defined for all signals; only the translation
/// identity needs an even reference signal.
const EVENNESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    /// The identity being checked requires an even signal.
    #[error("signal is not even: max |f(x) - f(-x)| = {deviation:.3e}")]
    NotEven { deviation: f64 },
}

/// Fourier transform `F(f)(d) = sum_x f(x) conj(chi_d(x))`, one coefficient
/// per character in canonical frequency order.
pub fn fourier_transform(f: &Signal) -> Spectrum {
    let g = f.group();
    let n = g.order();
    let values: Vec<Complex64> = (0..n)
        .map(|d| {
            (0..n)
                .map(|x| f.at(x) * g.char_eval_indices(d, x).conj())
                .sum()
        })
        .collect();
    Spectrum::new(g.clone(), SpectrumBasis::Dual, values)
        .expect("dual spectrum length equals group order")
}

/// Inverse Fourier transform `f(x) = (1/|G|) sum_d F(d) chi_d(x)`.
pub fn inverse_fourier_transform(spec: &Spectrum) -> Result<Signal, TransformError> {
    let g = spec.group();
    let n = g.order();
    if spec.basis() != SpectrumBasis::Dual {
        return Err(SignalError::BasisMismatch.into());
    }
    let scale = 1.0 / n as f64;
    let values: Vec<Complex64> = (0..n)
        .map(|x| {
            (0..n)
                .map(|d| spec.at(d) * g.char_eval_indices(d, x))
                .sum::<Complex64>()
                * scale
        })
        .collect();
    Ok(Signal::new(g.clone(), values)?)
}

/// Group convolution `(f * g)(x) = sum_u f(u) g(x - u)`.
pub fn fourier_convolution(f: &Signal, g: &Signal) -> Result<Signal, TransformError> {
    let grp = same_group(f, g)?;
    let n = grp.order();
    let values: Vec<Complex64> = (0..n)
        .map(|x| (0..n).map(|u| f.at(u) * g.at(grp.sub_indices(x, u))).sum())
        .collect();
    Ok(Signal::new(grp.clone(), values)?)
}

/// Cosine transform `C(f)(c) = sum_x f(x) c(x)`, one coefficient per cosine
/// orbit by ascending representative. Note: no conjugate — the cosine
/// functions are real.
pub fn cosine_transform(f: &Signal) -> Spectrum {
    let g = f.group();
    let n = g.order();
    let values: Vec<Complex64> = g
        .cosine_orbit_reps()
        .into_iter()
        .map(|rep| {
            (0..n)
                .map(|x| f.at(x) * g.cosine_eval_rep_index(rep, x))
                .sum()
        })
        .collect();
    Spectrum::new(g.clone(), SpectrumBasis::Cosine, values)
        .expect("cosine spectrum length equals orbit count")
}

/// Cosine convolution
/// `(f *_c g)(x) = sum_u f(u) (g(x + u) + g(x - u)) / 2`.
pub fn cosine_convolution(f: &Signal, g: &Signal) -> Result<Signal, TransformError> {
    let grp = same_group(f, g)?;
    let n = grp.order();
    let values: Vec<Complex64> = (0..n)
        .map(|x| {
            (0..n)
                .map(|u| {
                    f.at(u) * (g.at(grp.add_indices(x, u)) + g.at(grp.sub_indices(x, u))) / 2.0
                })
                .sum()
        })
        .collect();
    Ok(Signal::new(grp.clone(), values)?)
}

/// Residual of the translation identity for the group convolution:
/// `max_x |(L_a g * L_b g)(x) - (g * L_{a+b} g)(x)|`,
/// where `(L_y g)(x) = g(x + y)`.
///
/// This holds for every signal `g` and all shifts, and is the algebraic
/// backbone of the Fourier-side extraction.
pub fn check_shift_lemma(g: &Signal, a: usize, b: usize) -> Result<f64, TransformError> {
    let grp = g.group();
    let lhs = fourier_convolution(&g.shift_by_index(a), &g.shift_by_index(b))?;
    let rhs = fourier_convolution(g, &g.shift_by_index(grp.add_indices(a, b)))?;
    Ok(lhs.max_abs_diff(&rhs)?)
}

/// Residual of the translation identity for the cosine convolution:
/// `max_x |(L_b g *_c L_a g)(x) - (g *_c (L_{a+b} g + L_{a-b} g)/2)(x)|`,
/// valid when `g` is even.
///
/// Returns [`TransformError::NotEven`] if `g` fails the evenness check,
/// because the identity genuinely breaks for odd parts.
pub fn check_dalembert_lemma(g: &Signal, a: usize, b: usize) -> Result<f64, TransformError> {
    let grp = g.group();
    let deviation = (0..grp.order())
        .map(|x| (g.at(x) - g.at(grp.neg_index(x))).norm())
        .fold(0.0, f64::max);
    if deviation > EVENNESS_TOL {
        return Err(TransformError::NotEven { deviation });
    }
    let lhs = cosine_convolution(&g.shift_by_index(b), &g.shift_by_index(a))?;
    let avg = g
        .shift_by_index(grp.add_indices(a, b))
        .add(&g.shift_by_index(grp.sub_indices(a, b)))?
        .scale(Complex64::new(0.5, 0.0));
    let rhs = cosine_convolution(g, &avg)?;
    Ok(lhs.max_abs_diff(&rhs)?)
}

fn same_group<'a>(f: &'a Signal, g: &'a Signal) -> Result<&'a FiniteAbelianGroup, TransformError> {
    if f.group() != g.group() {
        return Err(SignalError::GroupMismatch {
            left: f.group().spec_string(),
            right: g.group().spec_string(),
        }
        .into());
    }
    Ok(f.group())
}
