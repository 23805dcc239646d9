//! Exact tools for rigid group actions on complex three-dimensional tori:
//! period lattices over cyclotomic integers, affine actions, cohomology of
//! translation parts, normalizer orbits, quotient singularities and the
//! toric resolution checks around them.

pub mod action;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod exact;
pub mod scalar;
pub mod singular;
pub mod toric;
pub mod torus;

pub use error::*;

/// Machine-word rationals used throughout the geometric layers.
pub type Rational = num_rational::Ratio<i64>;
/// Integers matching [`Rational`].
pub type Int = i64;
/// Elements of cyclotomic fields with [`Rational`] coefficients.
pub type Cyclo = exact::Cyclotomic<Rational>;
pub type IntMat = exact::Matrix<Int>;
pub type RatMat = exact::Matrix<Rational>;
pub type CycloMat = exact::Matrix<Cyclo>;
/// Arbitrary precision variants of the same machinery.
pub type BigRational = num_rational::BigRational;
pub type CycloBig = exact::Cyclotomic<BigRational>;
