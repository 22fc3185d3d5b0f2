//! The on-disk JSON formats: kernels and theta assignments round-trip
//! through files, and loading re-validates every invariant.
//!
//! Complex entries are [re, im] pairs; kernels are row-major matrices;
//! every file carries schema_version and a kind tag. This is the same
//! format the `convchar` binary's `make-operator` and `extract`
//! subcommands speak.

use convchar::io::{load_operator, load_theta, save_operator, save_theta, LoadedOperator};
use convchar::{
    build_from_theta, check_multiplicativity, FiniteAbelianGroup, OperatorKind, ThetaAssignment,
    ThetaTarget, TransformKind,
};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let group: FiniteAbelianGroup = "2x3".parse().unwrap();

    let theta = ThetaAssignment::new(vec![
        ThetaTarget::Dual { index: 3 },
        ThetaTarget::Annihilated,
        ThetaTarget::Dual { index: 0 },
        ThetaTarget::Dual { index: 0 },
        ThetaTarget::Dual { index: 5 },
        ThetaTarget::Dual { index: 2 },
    ]);

    // Theta file.
    let theta_path = dir.path().join("theta.json");
    save_theta(&theta_path, OperatorKind::Fourier, &theta).unwrap();
    println!("--- theta.json ---");
    print!("{}", std::fs::read_to_string(&theta_path).unwrap());
    let loaded = load_theta(&theta_path).unwrap();
    assert_eq!(loaded.targets, theta);

    // Operator file: built from the theta, saved, loaded back identically.
    let op = build_from_theta(&group, TransformKind::Fourier, &theta).unwrap();
    let op_path = dir.path().join("operator.json");
    save_operator(&op_path, &op).unwrap();
    let text = std::fs::read_to_string(&op_path).unwrap();
    println!("\n--- operator.json (first lines) ---");
    for line in text.lines().take(12) {
        println!("{line}");
    }
    println!("... ({} bytes total)", text.len());

    match load_operator(&op_path).unwrap() {
        LoadedOperator::Finite(restored) => {
            assert_eq!(restored, op);
            println!(
                "\nreloaded kernel is bit-identical; multiplicativity residual {:.3e}",
                check_multiplicativity(&restored)
            );
        }
        LoadedOperator::Laplace(_) => unreachable!(),
    }

    // Loading re-runs validation: a truncated row is refused with context.
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["kernel"][2].as_array_mut().unwrap().pop();
    let bad_path = dir.path().join("broken.json");
    std::fs::write(&bad_path, serde_json::to_string(&doc).unwrap()).unwrap();
    match load_operator(&bad_path) {
        Err(err) => println!("\ntruncated kernel refused: {:#}", anyhow::Error::new(err)),
        Ok(_) => unreachable!("validation must catch the short row"),
    }
}
