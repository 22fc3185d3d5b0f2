//! The identities everything else rests on, checked on random signals.
//!
//! * Fourier convolution theorem: F(f * g) = F(f) F(g).
//! * Shift lemma: (L_y f) * g evaluated at x equals (f * g)(x + y).
//! * d'Alembert lemma: for even g, the symmetrized self-convolutions
//!   satisfy (L_x g) *_c (L_y g) = g *_c (L_{x+y} g + L_{x-y} g) / 2.
//! * Cosine convolution theorem: C(f *_c g) = C(f) C(g) — for all f, g,
//!   not just even ones.

use convchar::transforms::{check_dalembert_lemma, check_shift_lemma};
use convchar::{
    cosine_convolution, cosine_transform, fourier_convolution, fourier_transform,
    FiniteAbelianGroup, Signal,
};

fn main() {
    for spec in ["8", "12", "2x3", "4x4"] {
        let group: FiniteAbelianGroup = spec.parse().unwrap();
        let n = group.order();

        let mut fourier = 0.0f64;
        let mut cosine = 0.0f64;
        for seed in 0..50 {
            let f = Signal::random(group.clone(), 2 * seed);
            let g = Signal::random(group.clone(), 2 * seed + 1);
            let scale = 1.0 + f.l1_norm() * g.l1_norm();

            let lhs = fourier_transform(&fourier_convolution(&f, &g).unwrap());
            let rhs = fourier_transform(&f)
                .pointwise_product(&fourier_transform(&g))
                .unwrap();
            fourier = fourier.max(lhs.max_abs_diff(&rhs).unwrap() / scale);

            let lhs = cosine_transform(&cosine_convolution(&f, &g).unwrap());
            let rhs = cosine_transform(&f)
                .pointwise_product(&cosine_transform(&g))
                .unwrap();
            cosine = cosine.max(lhs.max_abs_diff(&rhs).unwrap() / scale);
        }

        // The two lemmas are exhaustive over all pairs of shifts.
        let mut shift = 0.0f64;
        let mut dalembert = 0.0f64;
        for seed in 100..110 {
            let g = Signal::random(group.clone(), seed);
            let even = g.evenize();
            for a in 0..n {
                for b in 0..n {
                    shift = shift.max(check_shift_lemma(&g, a, b).unwrap());
                    dalembert = dalembert.max(check_dalembert_lemma(&even, a, b).unwrap());
                }
            }
        }

        println!("group {spec}:");
        println!("  fourier convolution theorem  {fourier:.3e}");
        println!("  cosine convolution theorem   {cosine:.3e}");
        println!("  shift lemma                  {shift:.3e}");
        println!("  d'Alembert lemma             {dalembert:.3e}");
    }

    // The d'Alembert lemma genuinely needs evenness: a non-even signal is
    // rejected rather than silently checked.
    let group: FiniteAbelianGroup = "5".parse().unwrap();
    let odd = Signal::delta(group, 1);
    let err = check_dalembert_lemma(&odd, 1, 2).unwrap_err();
    println!("\nnon-even input is refused: {err}");
}
