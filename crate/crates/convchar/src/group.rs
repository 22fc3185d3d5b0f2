//! Finite abelian groups as products of cyclic factors, together with their
//! characters and the class of cosine functions.
//!
//! Every group here is a product `Z_{n_1} x ... x Z_{n_k}` with the counting
//! measure as Haar measure, so all integrals elsewhere in the crate are plain
//! finite sums. Elements and characters are enumerated lexicographically by
//! their coordinate tuples (first factor most significant); that enumeration
//! is part of the public contract because kernel matrices are indexed by it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;

/// Errors from group construction and element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// A cyclic factor of order zero was supplied.
    #[error("cyclic factor orders must be at least 1")]
    ZeroFactor,
    /// An element or character has the wrong number of coordinates.
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A group spec string such as "4x3" failed to parse.
    #[error("invalid group spec `{0}`: expected positive cyclic orders like \"4x3\"")]
    InvalidSpec(String),
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_k}`.
///
/// The element with index `i` has coordinates given by the mixed-radix
/// digits of `i` with the last factor varying fastest, which is exactly the
/// lexicographic order on coordinate tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
    order: usize,
}

impl FiniteAbelianGroup {
    /// Builds the product of the given cyclic orders. All orders must be >= 1.
    pub fn new(factors: Vec<usize>) -> Result<Self, GroupError> {
        if factors.contains(&0) {
            return Err(GroupError::ZeroFactor);
        }
        let order = factors.iter().product();
        Ok(Self { factors, order })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Canonical spec string, e.g. `"4x3"` for `Z_4 x Z_3`.
    pub fn spec_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_owned();
        }
        self.factors
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    /// The identity element.
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Element with the given canonical index. Panics if `index >= order`.
    pub fn element(&self, index: usize) -> GroupElement {
        assert!(index < self.order, "element index {index} out of range");
        GroupElement {
            coords: self.decode(index),
        }
    }

    /// Canonical index of an element.
    pub fn index_of(&self, a: &GroupElement) -> Result<usize, GroupError> {
        self.check_dims(a.coords.len())?;
        let mut idx = 0;
        for (&c, &n) in a.coords.iter().zip(&self.factors) {
            idx = idx * n + c % n;
        }
        Ok(idx)
    }

    /// Iterates over all elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    /// Componentwise sum `(a_j + b_j) mod n_j`.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_dims(a.coords.len())?;
        self.check_dims(b.coords.len())?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Componentwise negation `(-a_j) mod n_j`.
    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_dims(a.coords.len())?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x % n) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Componentwise difference `a - b`.
    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Index-space group law; avoids allocating coordinate tuples in the
    /// dense O(n^2) loops of the transforms.
    pub fn add_indices(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.order && j < self.order);
        let mut ii = i;
        let mut jj = j;
        let mut out = 0;
        let mut weight = 1;
        for &n in self.factors.iter().rev() {
            let s = (ii % n + jj % n) % n;
            out += s * weight;
            weight *= n;
            ii /= n;
            jj /= n;
        }
        out
    }

    /// Index-space negation.
    pub fn neg_index(&self, i: usize) -> usize {
        debug_assert!(i < self.order);
        let mut ii = i;
        let mut out = 0;
        let mut weight = 1;
        for &n in self.factors.iter().rev() {
            let s = (n - ii % n) % n;
            out += s * weight;
            weight *= n;
            ii /= n;
        }
        out
    }

    /// Index-space difference `i - j`.
    pub fn sub_indices(&self, i: usize, j: usize) -> usize {
        self.add_indices(i, self.neg_index(j))
    }

    /// Phase `sum_j d_j x_j / n_j` (in turns) of the character pairing,
    /// with each product reduced mod `n_j` to keep round-off small.
    fn pairing_phase(&self, d: usize, x: usize) -> f64 {
        let mut dd = d;
        let mut xx = x;
        let mut phase = 0.0;
        for &n in self.factors.iter().rev() {
            let dj = dd % n;
            let xj = xx % n;
            phase += ((dj * xj) % n) as f64 / n as f64;
            dd /= n;
            xx /= n;
        }
        phase
    }

    /// Character evaluation `chi_d(x) = exp(2 pi i sum_j d_j x_j / n_j)`.
    pub fn char_eval(&self, d: &DualCharacter, x: &GroupElement) -> Complex64 {
        let di = self
            .index_of(&GroupElement {
                coords: d.freq.clone(),
            })
            .expect("character frequency valid for group");
        let xi = self.index_of(x).expect("element valid for group");
        self.char_eval_indices(di, xi)
    }

    /// Character evaluation by canonical indices.
    pub fn char_eval_indices(&self, d: usize, x: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.pairing_phase(d, x))
    }

    /// Cosine function evaluation by orbit representative index:
    /// `c_k(x) = cos(2 pi sum_j k_j x_j / n_j)`, always real.
    pub fn cosine_eval_rep_index(&self, rep: usize, x: usize) -> f64 {
        (TAU * self.pairing_phase(rep, x)).cos()
    }

    /// Cosine function evaluation `c(x) = (chi_k(x) + chi_{-k}(x)) / 2`.
    pub fn cosine_eval(&self, c: &CosineClassElement, x: &GroupElement) -> f64 {
        let rep = self
            .index_of(&GroupElement {
                coords: c.rep.clone(),
            })
            .expect("orbit representative valid for group");
        let xi = self.index_of(x).expect("element valid for group");
        self.cosine_eval_rep_index(rep, xi)
    }

    /// All characters of the group, in canonical frequency order.
    pub fn enumerate_duals(&self) -> Vec<DualCharacter> {
        (0..self.order)
            .map(|i| DualCharacter {
                freq: self.decode(i),
            })
            .collect()
    }

    /// Representative frequency indices of the orbits `{k, -k}`, ascending.
    /// The representative is the smaller of the two indices.
    pub fn cosine_orbit_reps(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&k| k <= self.neg_index(k))
            .collect()
    }

    /// One cosine function per orbit `{k, -k}` of frequency negation.
    pub fn enumerate_cosine_class(&self) -> Vec<CosineClassElement> {
        self.cosine_orbit_reps()
            .into_iter()
            .map(|k| CosineClassElement {
                rep: self.decode(k),
                partner: self.decode(self.neg_index(k)),
            })
            .collect()
    }

    /// Number of cosine-class orbits without materializing them.
    pub fn cosine_class_size(&self) -> usize {
        (0..self.order).filter(|&k| k <= self.neg_index(k)).count()
    }

    fn decode(&self, index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.factors.len()];
        let mut i = index;
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = i % n;
            i /= n;
        }
        coords
    }

    fn check_dims(&self, found: usize) -> Result<(), GroupError> {
        if found != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.factors.len(),
                found,
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = GroupError;

    /// Parses a spec string like `"4x3"` into `Z_4 x Z_3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let factors: Result<Vec<usize>, _> = s
            .split('x')
            .map(|part| part.trim().parse::<usize>())
            .collect();
        match factors {
            Ok(f) if !f.is_empty() && f.iter().all(|&n| n >= 1) => Self::new(f),
            _ => Err(GroupError::InvalidSpec(s.to_owned())),
        }
    }
}

/// An element of a [`FiniteAbelianGroup`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<usize>,
}

impl GroupElement {
    /// Builds an element from raw coordinates, reducing each mod `n_j`.
    pub fn new(group: &FiniteAbelianGroup, coords: &[usize]) -> Result<Self, GroupError> {
        group.check_dims(coords.len())?;
        let coords = coords
            .iter()
            .zip(group.factors())
            .map(|(&c, &n)| c % n)
            .collect();
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A character of the group, identified by its frequency tuple.
///
/// Finite abelian groups are self-dual, so frequencies live in the same
/// coordinate system as elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualCharacter {
    freq: Vec<usize>,
}

impl DualCharacter {
    pub fn new(group: &FiniteAbelianGroup, freq: &[usize]) -> Result<Self, GroupError> {
        group.check_dims(freq.len())?;
        let freq = freq
            .iter()
            .zip(group.factors())
            .map(|(&c, &n)| c % n)
            .collect();
        Ok(Self { freq })
    }

    pub fn freq(&self) -> &[usize] {
        &self.freq
    }
}

/// A cosine function on the group: the orbit `{k, -k}` of a frequency under
/// negation, evaluated as `(chi_k + chi_{-k}) / 2`.
///
/// Two values are equal exactly when their orbits coincide; the stored
/// representative is the canonically smaller frequency.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosineClassElement {
    rep: Vec<usize>,
    partner: Vec<usize>,
}

impl CosineClassElement {
    /// The canonical (smaller-index) frequency of the orbit.
    pub fn representative(&self) -> &[usize] {
        &self.rep
    }

    /// The negated frequency; equals the representative on 2-torsion orbits.
    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// True when `k = -k`, i.e. the orbit is a single frequency.
    pub fn is_self_paired(&self) -> bool {
        self.rep == self.partner
    }
}
