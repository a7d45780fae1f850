//! Exact arithmetic: radical-rational scalars, Hermitian polynomials,
//! rational functions, sphere normal forms, determinants and Sturm chains.

pub mod det;
pub mod poly;
pub mod radical;
pub mod ratfn;
pub mod rational;
pub mod sphere;
pub mod sturm;

pub use det::{poly_matrix_adjugate, poly_matrix_det};
pub use poly::{DerivKind, HermitianPoly, Monomial};
pub use radical::RadicalNumber;
pub use ratfn::{Certification, RationalFunction};
pub use rational::{fmt_rational, rat, rat_int, rational_to_f64, GaussianRational, Rational};
pub use sphere::{ratfn_eq_on_sphere, ratfn_zero_on_sphere, reduce_mod_sphere, reduce_ratfn};
pub use sturm::{sturm_roots_unit_interval, IsolatedRoot, SturmResult, UniPoly};
