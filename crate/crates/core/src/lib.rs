//! Exact symbolic CR Ahlfors invariants of maps between spheres.
//!
//! The algebra layer is exact (radical-rational coefficients, arbitrary
//! precision); floating point appears only in the [`numeric`] oracle.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod maps;
pub mod numeric;
pub mod parse;
pub mod report;

pub use algebra::{
    rat, DerivKind, GaussianRational, HermitianPoly, Monomial, RadicalNumber, Rational, RationalFunction,
};
pub use error::{AlgebraError, Error, Result};
