//! Anatomy of an extraction report.
//!
//! Every row of the report retraces the proof: where the pivot witness
//! sits, how far chi is from unit modulus, the residual of its functional
//! equation, the distance to the matched dual object and to the runner-up,
//! and the final factorization residual. This example prints the full JSON
//! for a small mixed case — the same document `convchar extract` wraps in
//! its envelope.

use convchar::io::to_report_string;
use convchar::{
    build_from_theta, extract_theta_fourier, FiniteAbelianGroup, ThetaAssignment, ThetaTarget,
    TransformKind, DEFAULT_TOL,
};

fn main() {
    let group: FiniteAbelianGroup = "6".parse().unwrap();
    let planted = ThetaAssignment::new(vec![
        ThetaTarget::Dual { index: 4 },
        ThetaTarget::Annihilated,
        ThetaTarget::Dual { index: 1 },
        ThetaTarget::Dual { index: 1 },
        ThetaTarget::Annihilated,
        ThetaTarget::Dual { index: 0 },
    ]);
    let operator = build_from_theta(&group, TransformKind::Fourier, &planted).unwrap();
    let report = extract_theta_fourier(&operator, DEFAULT_TOL);
    print!("{}", to_report_string(&report));
    assert_eq!(report.theta, Some(planted));
}
