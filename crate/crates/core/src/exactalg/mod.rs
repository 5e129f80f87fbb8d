//! Exact arithmetic substrate shared by every other module.

mod binary;
mod matrix;
mod poly;
mod rational;
mod ring;
mod scalar;
mod unipoly;

pub use binary::{binary_form_positive, discriminant, BinaryForm, RealSignAnalysis, RootInterval};
pub use matrix::{adjugate, det_exact, det_symbolic, kernel_basis, ExactMatrix, Matrix};
pub use poly::{Exponents, Poly};
pub use rational::{
    binomial, factorial, format_rational, int, multi_factorial, parse_rational, primitive_integer_vector,
    rat, serde_rational, Rational,
};
pub use ring::{GradedForm, Multidegree, Ring, TermRecord};
pub use scalar::CommRing;
pub use unipoly::{sturm_real_root_count, UniPoly};
