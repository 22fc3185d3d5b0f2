//! Discretized half line: Laplace transform by trapezoidal quadrature,
//! causal convolution, and convergence studies for the multiplicative
//! identity `L(f * g)(y) = L(f)(y) L(g)(y)`.
//!
//! The half line is truncated at a caller-chosen horizon; the convergence
//! study exposes both the quadrature order (trapezoid, so ~2) and the
//! truncation sensitivity rather than hiding them.

use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaplaceError {
    /// The grid step must be positive and finite.
    #[error("grid step must be positive and finite, got {step}")]
    InvalidStep { step: f64 },
    /// A grid needs at least two nodes to integrate anything.
    #[error("grid needs at least 2 nodes, got {count}")]
    TooFewNodes { count: usize },
    /// Signal length does not match the node count of its grid.
    #[error("signal has {found} values but the grid has {expected} nodes")]
    LengthMismatch { expected: usize, found: usize },
    /// A NaN or infinite sample was supplied.
    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },
    /// Two signals live on different grids.
    #[error("operands live on different grids")]
    GridMismatch,
    /// The Laplace variable must be a positive real.
    #[error("transform parameter must be positive, got {y}")]
    NonPositiveParameter { y: f64 },
    /// A test-function name was not recognized.
    #[error("unknown test function `{0}` (expected exp, const, or poly)")]
    UnknownFunction(String),
}

/// Uniform grid `x_i = i h` for `i = 0, ..., N-1`, so the horizon is
/// `X = (N-1) h`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineGrid {
    step: f64,
    count: usize,
}

impl HalfLineGrid {
    /// Grid with the given step and node count (`count >= 2`).
    pub fn new(step: f64, count: usize) -> Result<Self, LaplaceError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(LaplaceError::InvalidStep { step });
        }
        if count < 2 {
            return Err(LaplaceError::TooFewNodes { count });
        }
        Ok(Self { step, count })
    }

    /// Grid covering `[0, horizon]` with the given step; the node count is
    /// rounded so that the last node lands on the horizon.
    pub fn with_horizon(step: f64, horizon: f64) -> Result<Self, LaplaceError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(LaplaceError::InvalidStep { step });
        }
        if !horizon.is_finite() {
            return Err(LaplaceError::TooFewNodes { count: 0 });
        }
        let count = (horizon / step).round() as usize + 1;
        Self::new(step, count)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn horizon(&self) -> f64 {
        (self.count - 1) as f64 * self.step
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }
}

/// A sampled function on a [`HalfLineGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    grid: HalfLineGrid,
    values: Vec<Complex64>,
}

impl GridSignal {
    pub fn new(grid: HalfLineGrid, values: Vec<Complex64>) -> Result<Self, LaplaceError> {
        if values.len() != grid.count() {
            return Err(LaplaceError::LengthMismatch {
                expected: grid.count(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(LaplaceError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zero(grid: HalfLineGrid) -> Self {
        let n = grid.count();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Samples a real-valued function at the grid nodes.
    pub fn from_fn(grid: HalfLineGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(|x| Complex64::new(f(x), 0.0)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }
}

/// Laplace transform `L(f)(y) = int_0^X e^{-y x} f(x) dx` by the trapezoid
/// rule on the signal's grid. Quadrature error is O(h^2) for smooth `f`,
/// plus the truncation the caller accepted by choosing the horizon.
pub fn laplace_transform(f: &GridSignal, y: f64) -> Result<Complex64, LaplaceError> {
    if !(y.is_finite() && y > 0.0) {
        return Err(LaplaceError::NonPositiveParameter { y });
    }
    let grid = f.grid();
    let n = grid.count();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let term = f.at(i) * (-y * grid.node(i)).exp();
        let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += term * weight;
    }
    Ok(acc * grid.step())
}

/// Causal convolution `(f * g)(x_i) = int_0^{x_i} f(u) g(x_i - u) du` by the
/// trapezoid rule over the nodes `0..=i`; the empty integral at `x_0 = 0`
/// is exactly zero.
pub fn laplace_convolution(f: &GridSignal, g: &GridSignal) -> Result<GridSignal, LaplaceError> {
    if f.grid() != g.grid() {
        return Err(LaplaceError::GridMismatch);
    }
    let grid = f.grid().clone();
    let n = grid.count();
    let h = grid.step();
    let fv = f.values();
    let gv = g.values();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = (fv[0] * gv[i] + fv[i] * gv[0]) * 0.5;
        for j in 1..i {
            acc += fv[j] * gv[i - j];
        }
        *slot = acc * h;
    }
    GridSignal::new(grid, out)
}

/// Built-in analytic test functions for studies and operator verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// `e^{-x}`.
    Exponential,
    /// The constant `1`.
    Constant,
    /// `x (2 - x)` on `[0, 2]`, zero beyond — compactly supported, so its
    /// transform has no truncation error once the horizon passes 2.
    PolynomialCutoff,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [
        TestFunction::Exponential,
        TestFunction::Constant,
        TestFunction::PolynomialCutoff,
    ];

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Exponential => (-x).exp(),
            TestFunction::Constant => 1.0,
            TestFunction::PolynomialCutoff => {
                if (0.0..=2.0).contains(&x) {
                    x * (2.0 - x)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample(&self, grid: HalfLineGrid) -> GridSignal {
        GridSignal::from_fn(grid, |x| self.eval(x))
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Exponential => "exp",
            TestFunction::Constant => "const",
            TestFunction::PolynomialCutoff => "poly",
        }
    }
}

impl FromStr for TestFunction {
    type Err = LaplaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exp" | "exponential" => Ok(TestFunction::Exponential),
            "const" | "constant" => Ok(TestFunction::Constant),
            "poly" | "polynomial" | "polynomial-cutoff" => Ok(TestFunction::PolynomialCutoff),
            other => Err(LaplaceError::UnknownFunction(other.to_owned())),
        }
    }
}

/// One step size of a [`convergence_study`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    /// Grid step.
    pub h: f64,
    /// Node count of the grid at this step.
    pub nodes: usize,
    /// `max_y |L(f * g)(y) - L(f)(y) L(g)(y)|` over the probed `y` values.
    pub max_residual: f64,
    /// Empirical order `ln(r_prev / r) / ln(h_prev / h)` against the previous
    /// row; absent on the first row and when a residual vanishes.
    pub observed_order: Option<f64>,
}

/// Measures the residual of the multiplicative identity
/// `L(f * g)(y) = L(f)(y) L(g)(y)` across step sizes at a fixed horizon.
///
/// With trapezoid quadrature the residual should shrink at second order
/// until truncation error takes over; `observed_order` makes that claim
/// checkable row by row.
pub fn convergence_study(
    f: TestFunction,
    g: TestFunction,
    y_values: &[f64],
    h_values: &[f64],
    horizon: f64,
) -> Result<Vec<ConvergenceRow>, LaplaceError> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(h_values.len());
    for &h in h_values {
        let grid = HalfLineGrid::with_horizon(h, horizon)?;
        let fs = f.sample(grid.clone());
        let gs = g.sample(grid.clone());
        let conv = laplace_convolution(&fs, &gs)?;
        let mut max_residual = 0.0f64;
        for &y in y_values {
            let lhs = laplace_transform(&conv, y)?;
            let rhs = laplace_transform(&fs, y)? * laplace_transform(&gs, y)?;
            max_residual = max_residual.max((lhs - rhs).norm());
        }
        let observed_order = rows.last().and_then(|prev| {
            let ratio_r = prev.max_residual / max_residual;
            let ratio_h = prev.h / h;
            if prev.max_residual > 0.0 && max_residual > 0.0 && ratio_h > 0.0 && ratio_h != 1.0 {
                Some(ratio_r.ln() / ratio_h.ln())
            } else {
                None
            }
        });
        rows.push(ConvergenceRow {
            h,
            nodes: grid.count(),
            max_residual,
            observed_order,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(h: f64, horizon: f64) -> HalfLineGrid {
        HalfLineGrid::with_horizon(h, horizon).unwrap()
    }

    #[test]
    fn grid_geometry() {
        let g = grid(0.001, 30.0);
        assert_eq!(g.count(), 30001);
        assert!((g.horizon() - 30.0).abs() < 1e-9);
        assert!((g.node(1) - 0.001).abs() < 1e-15);
        assert!(HalfLineGrid::new(0.0, 10).is_err());
        assert!(HalfLineGrid::new(-1.0, 10).is_err());
        assert!(HalfLineGrid::new(0.1, 1).is_err());
    }

    #[test]
    fn transform_of_zero_is_zero() {
        let f = GridSignal::zero(grid(0.01, 5.0));
        assert_eq!(
            laplace_transform(&f, 1.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn transform_of_exponential_matches_closed_form() {
        // L(e^{-x})(1) = 1/2; quadrature error ~ h^2/6, truncation ~ e^{-60}.
        let f = TestFunction::Exponential.sample(grid(0.001, 30.0));
        let v = laplace_transform(&f, 1.0).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn transform_of_constant_matches_truncated_closed_form() {
        // int_0^X e^{-2x} dx = (1 - e^{-2X}) / 2.
        let x_max = 10.0;
        let f = TestFunction::Constant.sample(grid(0.001, x_max));
        let v = laplace_transform(&f, 2.0).unwrap();
        let want = (1.0 - (-2.0 * x_max).exp()) / 2.0;
        assert!((v - Complex64::new(want, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn transform_rejects_nonpositive_parameter() {
        let f = GridSignal::zero(grid(0.1, 1.0));
        assert!(matches!(
            laplace_transform(&f, 0.0),
            Err(LaplaceError::NonPositiveParameter { .. })
        ));
        assert!(laplace_transform(&f, -1.0).is_err());
    }

    #[test]
    fn convolution_of_ones_is_identity_function() {
        // int_0^x du = x, and the trapezoid rule is exact on constants.
        let g = grid(0.01, 3.0);
        let one = TestFunction::Constant.sample(g.clone());
        let conv = laplace_convolution(&one, &one).unwrap();
        for i in 0..g.count() {
            assert!(
                (conv.at(i) - Complex64::new(g.node(i), 0.0)).norm() < 1e-12,
                "i = {i}"
            );
        }
    }

    #[test]
    fn convolution_linear_with_one() {
        // (x * 1)(x_i) = x_i^2 / 2, again trapezoid-exact for a linear
        // integrand.
        let g = grid(0.01, 2.0);
        let lin = GridSignal::from_fn(g.clone(), |x| x);
        let one = TestFunction::Constant.sample(g.clone());
        let conv = laplace_convolution(&lin, &one).unwrap();
        for i in 0..g.count() {
            let want = g.node(i).powi(2) / 2.0;
            let err = (conv.at(i) - Complex64::new(want, 0.0)).norm();
            assert!(err < 1e-12, "i = {i}: err {err:.3e}");
        }
    }

    #[test]
    fn convolution_of_exponentials_matches_closed_form() {
        // (e^{-x} * e^{-x})(x) = x e^{-x}; the integrand is constant in u,
        // so the quadrature is exact up to round-off.
        let g = grid(0.01, 5.0);
        let f = TestFunction::Exponential.sample(g.clone());
        let conv = laplace_convolution(&f, &f).unwrap();
        for i in 0..g.count() {
            let x = g.node(i);
            let want = x * (-x).exp();
            assert!(
                (conv.at(i) - Complex64::new(want, 0.0)).norm() < 1e-12,
                "i = {i}"
            );
        }
    }

    #[test]
    fn convolution_starts_at_zero() {
        let g = grid(0.5, 4.0);
        let f = TestFunction::Constant.sample(g.clone());
        let p = TestFunction::PolynomialCutoff.sample(g);
        let conv = laplace_convolution(&f, &p).unwrap();
        assert_eq!(conv.at(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn convolution_rejects_grid_mismatch() {
        let a = GridSignal::zero(grid(0.1, 1.0));
        let b = GridSignal::zero(grid(0.1, 2.0));
        assert!(matches!(
            laplace_convolution(&a, &b),
            Err(LaplaceError::GridMismatch)
        ));
    }

    #[test]
    fn convolution_is_causal() {
        // Changing g beyond node m must not change the convolution at <= m.
        let gr = grid(0.05, 2.0);
        let f = TestFunction::Exponential.sample(gr.clone());
        let g1 = TestFunction::PolynomialCutoff.sample(gr.clone());
        let m = 20;
        let mut tail_values = g1.values().to_vec();
        for v in tail_values.iter_mut().skip(m + 1) {
            *v += Complex64::new(5.0, -3.0);
        }
        let g2 = GridSignal::new(gr, tail_values).unwrap();
        let c1 = laplace_convolution(&f, &g1).unwrap();
        let c2 = laplace_convolution(&f, &g2).unwrap();
        for i in 0..=m {
            assert_eq!(c1.at(i), c2.at(i), "prefix changed at {i}");
        }
        assert!((c1.at(m + 1) - c2.at(m + 1)).norm() > 0.0);
    }

    #[test]
    fn convolution_is_symmetric() {
        let gr = grid(0.02, 3.0);
        let f = TestFunction::Exponential.sample(gr.clone());
        let g = TestFunction::PolynomialCutoff.sample(gr);
        let fg = laplace_convolution(&f, &g).unwrap();
        let gf = laplace_convolution(&g, &f).unwrap();
        for i in 0..fg.values().len() {
            assert!((fg.at(i) - gf.at(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn study_shows_second_order_for_exponentials() {
        let rows = convergence_study(
            TestFunction::Exponential,
            TestFunction::Exponential,
            &[0.5, 1.0, 2.0],
            &[0.02, 0.01],
            20.0,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].observed_order.is_none());
        let ratio = rows[0].max_residual / rows[1].max_residual;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
        let order = rows[1].observed_order.unwrap();
        assert!((1.5..=2.5).contains(&order), "order {order}");
    }

    #[test]
    fn zero_signal_has_zero_identity_residual() {
        // The study's residual formula applied to the zero signal is exactly
        // zero: both sides of the identity vanish identically.
        let g = grid(0.01, 2.0);
        let z = GridSignal::zero(g.clone());
        let conv = laplace_convolution(&z, &z).unwrap();
        let lhs = laplace_transform(&conv, 1.0).unwrap();
        let rhs = laplace_transform(&z, 1.0).unwrap() * laplace_transform(&z, 1.0).unwrap();
        assert_eq!((lhs - rhs).norm(), 0.0);
    }

    #[test]
    fn study_horizon_sensitivity() {
        // Doubling the horizon at fixed h strictly reduces the residual while
        // truncation dominates.
        let mut residuals = Vec::new();
        for x_max in [2.0, 4.0, 8.0] {
            let rows = convergence_study(
                TestFunction::Exponential,
                TestFunction::Exponential,
                &[0.5, 1.0],
                &[0.01],
                x_max,
            )
            .unwrap();
            residuals.push(rows[0].max_residual);
        }
        assert!(residuals[0] > residuals[1]);
        assert!(residuals[1] > residuals[2]);
    }

    #[test]
    fn test_function_parsing() {
        assert_eq!(
            "exp".parse::<TestFunction>().unwrap(),
            TestFunction::Exponential
        );
        assert_eq!(
            "constant".parse::<TestFunction>().unwrap(),
            TestFunction::Constant
        );
        assert_eq!(
            "polynomial-cutoff".parse::<TestFunction>().unwrap(),
            TestFunction::PolynomialCutoff
        );
        assert!(matches!(
            "gaussian".parse::<TestFunction>(),
            Err(LaplaceError::UnknownFunction(_))
        ));
    }

    #[test]
    fn polynomial_cutoff_support() {
        let p = TestFunction::PolynomialCutoff;
        assert_eq!(p.eval(0.0), 0.0);
        assert_eq!(p.eval(1.0), 1.0);
        assert_eq!(p.eval(2.0), 0.0);
        assert_eq!(p.eval(2.5), 0.0);
    }
}
