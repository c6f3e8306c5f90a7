//! Exact enumeration and classification of factorizations of fixed SL(2,ℤ)
//! matrices into primitive parabolic factors.
//!
//! The layers, bottom to top:
//!
//! - [`sl2z`] — arbitrary-precision 2×2 matrices and the `(ε, c, d)`
//!   parametrization of primitive parabolic elements;
//! - [`diophantine`] — the two integer reductions: the hyperbola
//!   `-ε(d₁² + d₂²) + 3d₁d₂ = 1` of the two-factor problem and Markov's
//!   equation `d₁² + d₂² + d₃² = 3d₁d₂d₃` of the three-factor problem;
//! - [`factorization`] — ordered tuples of parabolic factors with a fixed
//!   product, Hurwitz moves, global conjugation, and orbit search;
//! - [`classifier`] — the exhaustive scans, the orbit classification, the
//!   matrix-level realizations of the Markov symmetries, and the
//!   verification suite ([`classifier::verify_paper`]);
//! - [`cli`] and [`output`] — the command-line surface with deterministic
//!   text and JSON output;
//! - [`guide`] — the book from `book/`, included as rustdoc so its code
//!   samples run under `cargo test --doc`.
//!
//! All arithmetic is exact. Scans use a guarded i128 fast path whose bounds
//! make overflow impossible; everything else is `num_bigint::BigInt`.

#![allow(clippy::result_large_err)]

pub mod classifier;
pub mod cli;
pub mod diophantine;
pub mod factorization;
pub mod guide;
pub mod output;
pub mod sl2z;

pub use factorization::Factorization;
pub use sl2z::{Mat2, ParabolicParams, Sign};
