//! Covering systems of F_q[x].
//!
//! Brute-force coverage checks, exact counts of friable polynomials, and
//! non-covering certificates built from distorted probability measures on the
//! residue rings F_q[x]/⟨Q_j⟩. All certificate arithmetic is exact.

pub mod algebra;
pub mod error;

pub use algebra::{Factorization, FieldElem, FieldSpec, Poly};
pub use error::{Error, Result};
pub mod covering;
pub mod rational;

pub use covering::{ArithmeticProgression, CoverageReport, CoveringSystem, ExhaustiveLimit};
pub mod distortion;
pub mod friable;
pub mod sample;
