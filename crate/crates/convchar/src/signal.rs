//! Complex-valued signals on a finite abelian group and spectra indexed by
//! the dual or by the cosine class.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{FiniteAbelianGroup, GroupElement, GroupError};

/// Errors from signal construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    /// The value vector length does not match the group order.
    #[error("signal has {found} values but the group has order {expected}")]
    LengthMismatch { expected: usize, found: usize },
    /// A NaN or infinite entry was supplied.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    /// Two signals or spectra live on different groups.
    #[error("operands live on different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    /// Two spectra use different index sets (dual vs cosine class).
    #[error("operands use different spectral bases")]
    BasisMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A function `G -> C`, stored densely in canonical element order.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    group: FiniteAbelianGroup,
    values: Vec<Complex64>,
}

impl Signal {
    /// Wraps a dense value vector; the length must equal the group order and
    /// every entry must be finite.
    pub fn new(group: FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self, SignalError> {
        if values.len() != group.order() {
            return Err(SignalError::LengthMismatch {
                expected: group.order(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        Ok(Self { group, values })
    }

    /// The zero signal.
    pub fn zero(group: FiniteAbelianGroup) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Kronecker delta at the element with canonical index `at`.
    pub fn delta(group: FiniteAbelianGroup, at: usize) -> Self {
        let mut s = Self::zero(group);
        s.values[at] = Complex64::new(1.0, 0.0);
        s
    }

    /// Pseudo-random signal with independent real and imaginary parts drawn
    /// uniformly from `[-1, 1]`. The same seed always yields the same signal.
    pub fn random(group: FiniteAbelianGroup, seed: u64) -> Self {
        Self::random_with(group, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Like [`Signal::random`], but drawing from a caller-owned generator so
    /// that sequences of signals can share one deterministic stream.
    pub fn random_with(group: FiniteAbelianGroup, rng: &mut impl Rng) -> Self {
        let values = (0..group.order())
            .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        Self { group, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at the element with canonical index `i`.
    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// Value at a group element.
    pub fn at_element(&self, x: &GroupElement) -> Result<Complex64, SignalError> {
        Ok(self.values[self.group.index_of(x)?])
    }

    /// Left translate `(L_y f)(x) = f(x + y)`.
    pub fn shift(&self, y: &GroupElement) -> Result<Signal, SignalError> {
        let yi = self.group.index_of(y)?;
        Ok(self.shift_by_index(yi))
    }

    /// Left translate by the element with canonical index `yi`.
    pub fn shift_by_index(&self, yi: usize) -> Signal {
        let values = (0..self.values.len())
            .map(|x| self.values[self.group.add_indices(x, yi)])
            .collect();
        Signal {
            group: self.group.clone(),
            values,
        }
    }

    /// Reflection `f(-x)`.
    pub fn reflect(&self) -> Signal {
        let values = (0..self.values.len())
            .map(|x| self.values[self.group.neg_index(x)])
            .collect();
        Signal {
            group: self.group.clone(),
            values,
        }
    }

    /// Symmetrization `f + f o neg`, i.e. `x -> f(x) + f(-x)`.
    ///
    /// Deliberately the sum rather than the average: a delta symmetrizes to
    /// a delta *pair* with unit mass at each support point, which is the
    /// shape the even-witness construction downstream wants.
    pub fn evenize(&self) -> Signal {
        let values = (0..self.values.len())
            .map(|x| self.values[x] + self.values[self.group.neg_index(x)])
            .collect();
        Signal {
            group: self.group.clone(),
            values,
        }
    }

    /// True when `f(-x) = f(x)` for all `x`, up to `tol`.
    pub fn is_even(&self, tol: f64) -> bool {
        (0..self.values.len())
            .all(|x| (self.values[x] - self.values[self.group.neg_index(x)]).norm() <= tol)
    }

    /// `sum_x |f(x)|`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// `max_x |f(x)|`.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_x |f(x) - g(x)|`.
    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64, SignalError> {
        self.check_same_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Signal) -> Result<Signal, SignalError> {
        self.check_same_group(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Signal {
            group: self.group.clone(),
            values,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    fn check_same_group(&self, other: &Signal) -> Result<(), SignalError> {
        if self.group != other.group {
            return Err(SignalError::GroupMismatch {
                left: self.group.spec_string(),
                right: other.group.spec_string(),
            });
        }
        Ok(())
    }
}

/// Which index set a spectrum is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumBasis {
    /// One coefficient per character, in canonical frequency order.
    Dual,
    /// One coefficient per cosine orbit `{k, -k}`, by ascending representative.
    Cosine,
}

/// Transform-side data: one coefficient per character or per cosine orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    group: FiniteAbelianGroup,
    basis: SpectrumBasis,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(
        group: FiniteAbelianGroup,
        basis: SpectrumBasis,
        values: Vec<Complex64>,
    ) -> Result<Self, SignalError> {
        let expected = match basis {
            SpectrumBasis::Dual => group.order(),
            SpectrumBasis::Cosine => group.cosine_class_size(),
        };
        if values.len() != expected {
            return Err(SignalError::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            group,
            basis,
            values,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn basis(&self) -> SpectrumBasis {
        self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// Coefficientwise product, defined only for spectra over the same group
    /// and basis. This is the multiplication that the transforms intertwine
    /// with convolution.
    pub fn pointwise_product(&self, other: &Spectrum) -> Result<Spectrum, SignalError> {
        if self.group != other.group {
            return Err(SignalError::GroupMismatch {
                left: self.group.spec_string(),
                right: other.group.spec_string(),
            });
        }
        if self.basis != other.basis {
            return Err(SignalError::BasisMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Spectrum {
            group: self.group.clone(),
            basis: self.basis,
            values,
        })
    }

    /// `max_d |F(d) - G(d)|`.
    pub fn max_abs_diff(&self, other: &Spectrum) -> Result<f64, SignalError> {
        if self.group != other.group {
            return Err(SignalError::GroupMismatch {
                left: self.group.spec_string(),
                right: other.group.spec_string(),
            });
        }
        if self.basis != other.basis {
            return Err(SignalError::BasisMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    fn g(spec: &str) -> FiniteAbelianGroup {
        spec.parse().unwrap()
    }

    #[test]
    fn delta_has_unit_mass() {
        let s = Signal::delta(g("4"), 2);
        assert_eq!(s.at(2), Complex64::new(1.0, 0.0));
        assert_eq!(s.l1_norm(), 1.0);
    }

    #[test]
    fn new_rejects_wrong_length() {
        let err = Signal::new(g("4"), vec![Complex64::new(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(
            err,
            SignalError::LengthMismatch {
                expected: 4,
                found: 3
            }
        ));
    }

    #[test]
    fn new_rejects_non_finite_entries() {
        let err = Signal::new(
            g("2"),
            vec![Complex64::new(0.0, 0.0), Complex64::new(f64::NAN, 0.0)],
        )
        .unwrap_err();
        assert!(matches!(err, SignalError::NonFinite { index: 1 }));
    }

    #[test]
    fn random_is_deterministic_and_seed_sensitive() {
        let a = Signal::random(g("3x5"), 7);
        let b = Signal::random(g("3x5"), 7);
        assert_eq!(a, b);
        let c = Signal::random(g("3x5"), 8);
        assert!(a.max_abs_diff(&c).unwrap() > 0.0);
        assert!(a
            .values()
            .iter()
            .all(|v| v.re.abs() <= 1.0 && v.im.abs() <= 1.0));
    }

    #[test]
    fn shift_moves_delta() {
        // (L_y delta_a)(x) = delta_a(x + y) is supported at x = a - y.
        let z5 = g("5");
        let d = Signal::delta(z5.clone(), 3);
        let shifted = d.shift(&GroupElement::new(&z5, &[1]).unwrap()).unwrap();
        assert_eq!(shifted.at(2), Complex64::new(1.0, 0.0));
        assert_eq!(shifted.l1_norm(), 1.0);
    }

    #[test]
    fn shift_composes_additively() {
        let grp = g("4x3");
        let f = Signal::random(grp.clone(), 1);
        let a = 5;
        let b = 7;
        let lhs = f.shift_by_index(a).shift_by_index(b);
        let rhs = f.shift_by_index(grp.add_indices(a, b));
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
    }

    #[test]
    fn reflect_is_involution() {
        let f = Signal::random(g("6"), 2);
        assert!(f.reflect().reflect().max_abs_diff(&f).unwrap() < 1e-15);
    }

    #[test]
    fn evenize_produces_even_signal() {
        let f = Signal::random(g("7"), 3);
        let even = f.evenize();
        assert!(even.is_even(1e-15));
        // delta pair: evenize(delta_1) on Z_4 = delta_1 + delta_3
        let d = Signal::delta(g("4"), 1).evenize();
        assert_eq!(d.at(1), Complex64::new(1.0, 0.0));
        assert_eq!(d.at(3), Complex64::new(1.0, 0.0));
        assert_eq!(d.at(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn evenize_doubles_fixed_points() {
        // At a 2-torsion point x = -x the sum counts the value twice.
        let d = Signal::delta(g("4"), 2).evenize();
        assert_eq!(d.at(2), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn norms() {
        let s = Signal::new(
            g("2"),
            vec![Complex64::new(3.0, 4.0), Complex64::new(0.0, -2.0)],
        )
        .unwrap();
        assert!((s.l1_norm() - 7.0).abs() < 1e-15);
        assert!((s.max_abs() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn group_mismatch_detected() {
        let a = Signal::zero(g("4"));
        let b = Signal::zero(g("2x2"));
        assert!(matches!(
            a.max_abs_diff(&b),
            Err(SignalError::GroupMismatch { .. })
        ));
    }

    #[test]
    fn spectrum_lengths() {
        let z4 = g("4");
        assert!(Spectrum::new(
            z4.clone(),
            SpectrumBasis::Dual,
            vec![Complex64::default(); 4]
        )
        .is_ok());
        assert!(Spectrum::new(
            z4.clone(),
            SpectrumBasis::Cosine,
            vec![Complex64::default(); 3]
        )
        .is_ok());
        assert!(matches!(
            Spectrum::new(z4, SpectrumBasis::Cosine, vec![Complex64::default(); 4]),
            Err(SignalError::LengthMismatch {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn pointwise_product_requires_matching_basis() {
        let z4 = g("4");
        let dual = Spectrum::new(
            z4.clone(),
            SpectrumBasis::Dual,
            vec![Complex64::default(); 4],
        )
        .unwrap();
        let cos = Spectrum::new(z4, SpectrumBasis::Cosine, vec![Complex64::default(); 3]).unwrap();
        assert!(matches!(
            dual.pointwise_product(&cos),
            Err(SignalError::BasisMismatch)
        ));
    }
}
