use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;

/// Commutative ring with exact division, the coefficient domain for matrices and binary forms.
///
/// Implemented for [`Rational`] (a field) and for [`Poly`] (division succeeds only when exact).
pub trait CommRing: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Option<Self>;
    fn from_i64_like(&self, n: i64) -> Self;
}

impl CommRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Rational::from_integer(n.into())
    }
}

impl CommRing for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.nvars(), Rational::one())
    }
    fn vanishes(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        Poly::div_exact(self, other)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Poly::constant(self.nvars(), Rational::from_integer(n.into()))
    }
}
