//! Harmonic analysis on the multiplicative semigroup of natural numbers,
//! and the desk-scale Riemann-hypothesis criterion diagnostics built on it.
//!
//! The crate is organized in four layers:
//!
//! * [`arith`] — exact integer infrastructure: linear sieves for μ, φ, σ and
//!   smallest prime factors, factorization into exponent vectors, Mertens and
//!   Chebyshev partial sums, primorials, harmonic numbers.
//! * [`dirichlet`] — the convolution algebra of finitely supported
//!   arithmetic functions with the weighted norm Σ |f(n)| n^{-β}.
//! * [`torus`] — truncated Laplace transforms f̃(z) = Σ f(a) z^{α(a)}, the
//!   Euler product over torus coordinates, and the closed-form circle-factor
//!   products that recover μ, φ and Λ from torus integrals.
//! * [`criteria`] — evaluators for the Nicolas primorial inequality, its
//!   torus-integral form, Mertens growth diagnostics, and the Lagarias
//!   divisor bound, each emitting per-index records with explicit margins.

pub mod arith;
pub mod criteria;
pub mod dirichlet;
pub mod error;
pub mod kahan;
pub mod torus;

pub use error::{Error, Result};

/// Euler–Mascheroni constant γ to 30 significant digits. The criteria
/// compare against e^γ and must all use this single definition.
pub const EULER_MASCHERONI: f64 = 0.577215664901532860606512090082;
