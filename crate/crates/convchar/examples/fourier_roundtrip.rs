//! Plant a relabeling map, build the operator it induces, and recover it.
//!
//! Any operator taking convolution to pointwise multiplication on a finite
//! abelian group must be the Fourier transform composed with a map theta
//! into the dual (with zero rows allowed). This example runs that statement
//! in both directions on Z_4 x Z_3.

use convchar::{
    build_from_theta, check_multiplicativity, extract_theta_fourier, verify_factorization,
    FiniteAbelianGroup, ThetaAssignment, ThetaTarget, TransformKind, DEFAULT_TOL,
};

fn main() {
    let group: FiniteAbelianGroup = "4x3".parse().unwrap();

    // A deliberately messy theta: a couple of swaps, one duplicate target,
    // and one annihilated row — theta may be any function into dual + {0}.
    let mut targets: Vec<ThetaTarget> = (0..group.order())
        .map(|index| ThetaTarget::Dual { index })
        .collect();
    targets.swap(1, 5);
    targets[7] = ThetaTarget::Dual { index: 2 };
    targets[10] = ThetaTarget::Annihilated;
    let planted = ThetaAssignment::new(targets);

    let operator = build_from_theta(&group, TransformKind::Fourier, &planted).unwrap();
    println!(
        "built a {} x {} kernel on Z_4 x Z_3",
        operator.rows(),
        group.order()
    );
    println!(
        "multiplicativity residual on the delta basis: {:.3e}",
        check_multiplicativity(&operator)
    );

    let report = extract_theta_fourier(&operator, DEFAULT_TOL);
    assert!(report.is_success());
    let recovered = report.theta.as_ref().unwrap();

    println!("\nrow  planted                recovered              pivot");
    for (row, (want, got)) in planted.iter().zip(recovered.iter()).enumerate() {
        println!(
            "{row:>3}  {:<22} {:<22} {:?}",
            format!("{want:?}"),
            format!("{got:?}"),
            report.rows[row].pivot
        );
        assert_eq!(want, got);
    }

    // Independent certificate: apply the kernel to random signals and
    // compare against the Fourier transform relabeled by theta.
    let residual = verify_factorization(&operator, &planted, 25, 0).unwrap();
    println!("\nfactorization check on 25 random signals: {residual:.3e}");
}
