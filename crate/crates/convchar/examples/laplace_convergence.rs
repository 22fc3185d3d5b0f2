//! How fast the discretized Laplace identity converges.
//!
//! On the half line the convolution theorem L(f * g) = L(f) L(g) only holds
//! up to quadrature error; the trapezoidal rule makes that error O(h^2).
//! This study halves h repeatedly and prints the observed order, which
//! should settle near 2 (residual ratio near 4 per halving).

use convchar::laplace::{convergence_study, TestFunction};

fn main() {
    let y_values = [0.5, 1.0, 2.0];
    let h_values = [0.08, 0.04, 0.02, 0.01, 0.005];
    let horizon = 20.0;

    for (f, g) in [
        (TestFunction::Exponential, TestFunction::Exponential),
        (TestFunction::Exponential, TestFunction::PolynomialCutoff),
        (TestFunction::Constant, TestFunction::PolynomialCutoff),
    ] {
        println!("f = {}, g = {}  (X = {horizon})", f.name(), g.name());
        println!("       h     nodes   max residual   observed order");
        let rows = convergence_study(f, g, &y_values, &h_values, horizon).unwrap();
        for row in rows {
            match row.observed_order {
                Some(order) => println!(
                    "  {:>6}   {:>7}   {:>12.4e}   {order:>14.3}",
                    row.h, row.nodes, row.max_residual
                ),
                None => println!(
                    "  {:>6}   {:>7}   {:>12.4e}   {:>14}",
                    row.h, row.nodes, row.max_residual, "-"
                ),
            }
        }
        println!();
    }
}
