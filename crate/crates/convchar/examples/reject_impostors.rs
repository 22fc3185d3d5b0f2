//! Operators that almost respect convolution, and the stage that unmasks
//! each one.
//!
//! The characterization is constructive, so every failure is localized: a
//! perturbed kernel fails the delta-basis multiplicativity check, a pure
//! character planted among cosine rows fails d'Alembert's equation, an
//! oscillating Laplace row fails the exponential functional equation, and
//! a growing row fits a nonpositive exponent.

use convchar::{
    build_from_theta, build_laplace_from_exponents, extract_theta_cosine, extract_theta_fourier,
    extract_theta_laplace, perturb, random_theta, FiniteAbelianGroup, HalfLineGrid,
    LaplaceOperatorKernel, MultiplicativeOperator, ThetaShape, TransformKind, DEFAULT_TOL,
    DEFAULT_TOL_EQ, DEFAULT_TOL_FIT,
};
use num_complex::Complex64;

/// A labeled kernel-row recipe for the half-line impostor showcase.
type LabeledRow = (&'static str, Box<dyn Fn(f64) -> Complex64>);

fn main() {
    // 1. A true Fourier kernel nudged by eps = 0.1: no longer
    //    multiplicative, and rejected before any row is trusted.
    let group: FiniteAbelianGroup = "8".parse().unwrap();
    let theta = random_theta(&group, TransformKind::Fourier, ThetaShape::Permutation, 1);
    let clean = build_from_theta(&group, TransformKind::Fourier, &theta).unwrap();
    let noisy = perturb(&clean, 0.1, 42).unwrap();
    let report = extract_theta_fourier(&noisy, DEFAULT_TOL);
    println!("perturbed fourier kernel: {}", report.error.unwrap());

    // ... while a nudge at round-off scale changes nothing.
    let tiny = perturb(&clean, 1e-12, 42).unwrap();
    let report = extract_theta_fourier(&tiny, DEFAULT_TOL);
    assert_eq!(report.theta.as_ref(), Some(&theta));
    println!("eps = 1e-12 perturbation: still extracts the same theta");

    // 2. A bare character chi_1 smuggled into a cosine-kind operator on
    //    Z_5. It is multiplicative for ordinary convolution but not for the
    //    symmetrized one; the d'Alembert residual is sin(2 pi / 5).
    let group: FiniteAbelianGroup = "5".parse().unwrap();
    let reps = group.cosine_orbit_reps();
    let mut kernel: Vec<Vec<Complex64>> = reps
        .iter()
        .map(|&rep| {
            (0..5)
                .map(|x| Complex64::new(group.cosine_eval_rep_index(rep, x), 0.0))
                .collect()
        })
        .collect();
    kernel[1] = (0..5).map(|x| group.char_eval_indices(1, x)).collect();
    let op = MultiplicativeOperator::new(group, TransformKind::Cosine, kernel).unwrap();
    let report = extract_theta_cosine(&op, DEFAULT_TOL);
    println!("\ncharacter row in a cosine operator:");
    println!("  overall: {}", report.error.as_ref().unwrap());
    println!("  row 1:   {}", report.rows[1].error().unwrap());
    let residual = report.multiplicativity_residual.unwrap();
    println!(
        "  residual {residual:.6} = sin(2 pi / 5) = {:.6}",
        (std::f64::consts::TAU / 5.0).sin()
    );

    // 3. Laplace-side impostors.
    let grid = HalfLineGrid::with_horizon(0.01, 10.0).unwrap();
    let cases: [LabeledRow; 3] = [
        (
            "oscillating e^{-u} cos u",
            Box::new(|u: f64| Complex64::new((-u).exp() * u.cos(), 0.0)),
        ),
        (
            "complex exponent e^{-(1+i)u}",
            Box::new(|u: f64| (Complex64::new(-1.0, -1.0) * u).exp()),
        ),
        (
            "growing e^{u/2}",
            Box::new(|u: f64| Complex64::new((0.5 * u).exp(), 0.0)),
        ),
    ];
    println!("\nlaplace rows that are not decaying exponentials:");
    for (label, row_fn) in cases {
        let row: Vec<Complex64> = grid.nodes().map(&row_fn).collect();
        let kernel = LaplaceOperatorKernel::new(grid.clone(), vec![1.0], vec![row]).unwrap();
        let report = extract_theta_laplace(&kernel, DEFAULT_TOL_EQ, DEFAULT_TOL_FIT);
        println!("  {label}: {}", report.error.unwrap());
    }

    // 4. For contrast, a legitimate steep exponential sails through even
    //    though its tail is ~1e-26.
    let theta = convchar::ThetaAssignment::new(vec![convchar::ThetaTarget::Exponent { z: 3.0 }]);
    let grid = HalfLineGrid::with_horizon(0.01, 20.0).unwrap();
    let kernel = build_laplace_from_exponents(grid, vec![2.0], &theta).unwrap();
    let report = extract_theta_laplace(&kernel, DEFAULT_TOL_EQ, DEFAULT_TOL_FIT);
    assert!(report.is_success());
    println!("\nsteep but genuine e^{{-3u}} over X = 20: accepted");
}
