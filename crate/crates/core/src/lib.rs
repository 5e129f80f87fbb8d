//! Exact apolarity computations for forms on products of projective spaces.
//!
//! Everything is computed over the rationals without rounding. The crate is
//! organised bottom-up:
//!
//! - [`exactalg`]: rationals, sparse multigraded polynomials, dense univariate
//!   polynomials, fraction-free linear algebra and Sturm-sequence root counting.
//! - [`apolarity`]: the differentiation pairing, toric catalecticants, binary
//!   apolar ideals and ranks.
//! - [`antipolar`]: antipolar forms, Ranestad-Schreyer membership and the
//!   ternary quartic forbidden-locus scan.
//! - [`realcert`]: exact inertia, real-rank certificates for bidegree `(2,2d)`
//!   forms and a seeded typical-rank sampler.
//! - [`hyperdet`]: matrix pencils and Schläfli-style hyperdeterminants of
//!   `2×n×n` and `2×2×2×2` tensors.

pub mod antipolar;
pub mod apolarity;
pub mod error;
pub mod exactalg;
pub mod hyperdet;
pub mod realcert;

pub use error::{Error, Result};
pub use exactalg::{
    BinaryForm, CommRing, ExactMatrix, GradedForm, Matrix, Multidegree, Poly, Rational, Ring,
    UniPoly,
};
