//! Operators that respect convolution are transforms in disguise.
//!
//! On a finite abelian group, any linear operator that turns convolution
//! into pointwise multiplication is the Fourier transform composed with a
//! relabeling of the dual group (plus annihilated components); the same
//! holds for the cosine transform with its symmetrized convolution, and for
//! the Laplace transform on the half line with causal convolution. This
//! crate makes the whole story executable:
//!
//! * [`group`] — finite abelian groups, their characters, and cosine
//!   classes;
//! * [`signal`] — complex signals on a group and their spectra;
//! * [`transforms`] — Fourier and cosine transforms, both convolutions, and
//!   the identities (convolution theorems, shift lemma, d'Alembert lemma)
//!   that drive the characterization;
//! * [`laplace`] — the discretized half line: trapezoidal transform, causal
//!   convolution, and convergence studies;
//! * [`characterize`] — the constructive direction: verify
//!   multiplicativity, extract the relabeling map theta row by row, certify
//!   the factorization, and report every stage;
//! * [`factory`] — the converse direction: build operators with prescribed
//!   theta, and perturb them to make counterexamples;
//! * [`io`] — JSON kernel and theta files plus canonical report rendering;
//! * [`cli`] — the `convchar` binary's subcommands.

pub mod characterize;
pub mod cli;
pub mod factory;
pub mod group;
pub mod io;
pub mod laplace;
pub mod signal;
pub mod transforms;

pub use characterize::{
    check_multiplicativity, extract_theta_cosine, extract_theta_fourier, extract_theta_laplace,
    verify_factorization, ExtractionError, ExtractionReport, LaplaceOperatorKernel,
    MultiplicativeOperator, OperatorError, OperatorKind, ThetaAssignment, ThetaTarget,
    TransformKind, DEFAULT_TOL, DEFAULT_TOL_EQ, DEFAULT_TOL_FIT,
};
pub use factory::{
    build_from_theta, build_laplace_from_exponents, perturb, random_theta, ThetaShape,
};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use laplace::{laplace_convolution, laplace_transform, GridSignal, HalfLineGrid, TestFunction};
pub use signal::{Signal, Spectrum, SpectrumBasis};
pub use transforms::{
    cosine_convolution, cosine_transform, fourier_convolution, fourier_transform,
    inverse_fourier_transform,
};
