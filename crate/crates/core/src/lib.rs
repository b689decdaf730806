//! Exact computations for closure operations on primary ideals in
//! two-dimensional standard graded rings `F_p[x,y,z]/(F)`.
//!
//! The crate evaluates, over a prime field, the numerical criteria that decide
//! whether a homogeneous element lies in the Frobenius, plus or tight closure
//! of a homogeneous primary ideal, using the projective bundles attached to
//! forcing data. Everything is exact: graded pieces are finite-dimensional
//! `F_p`-vector spaces and every claim comes with a certificate that can be
//! re-checked by multiplication.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod frobenius;
pub mod geometry;
pub mod membership;
pub mod syzygy;
pub mod verdict;

pub use algebra::{ForcingData, GradedMap, GradedRing, Matrix, Monomial, Poly, PrimeField};
pub use error::{Error, Result};
