use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{sign_of, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_of(&self.eval(x))
    }

    pub fn sign_at_pos_inf(&self) -> i8 {
        sign_of(&self.leading())
    }

    pub fn sign_at_neg_inf(&self) -> i8 {
        let s = sign_of(&self.leading());
        if self.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Signed remainder sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut next = self.derivative().positive_primitive();
        while !next.is_zero() {
            let r = chain.last().unwrap().divrem(&next).1;
            chain.push(next);
            next = (-&r).positive_primitive();
        }
        chain
    }

    /// Integer polynomial with coprime coefficients, obtained by a positive rescaling; signs
    /// at every point are unchanged.
    fn positive_primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let content = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        UniPoly::new(nums.into_iter().map(|n| Rational::from_integer(n / &content)).collect())
    }

    /// Distinct real roots over the whole line. The zero polynomial is rejected.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Degenerate("zero polynomial has infinitely many roots".into()));
        }
        let chain = self.squarefree_part().sturm_chain();
        let lo = variations(chain.iter().map(UniPoly::sign_at_neg_inf));
        let hi = variations(chain.iter().map(UniPoly::sign_at_pos_inf));
        Ok(lo - hi)
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: &Rational, b: &Rational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Degenerate("zero polynomial has infinitely many roots".into()));
        }
        if a >= b {
            return Ok(0);
        }
        let chain = self.squarefree_part().sturm_chain();
        let va = variations(chain.iter().map(|p| p.sign_at(a)));
        let vb = variations(chain.iter().map(|p| p.sign_at(b)));
        Ok(va - vb)
    }

    /// Every complex root has modulus strictly below the returned value: Fujiwara's bound
    /// `2·max |a_{n−k}/a_n|^{1/k}` with each root rounded up to a power of two.
    pub fn root_bound(&self) -> Rational {
        let n = self.coeffs.len() - 1;
        let lead = self.leading().abs();
        let mut exp = 0u32;
        for k in 1..=n {
            let mut ratio = self.coeffs[n - k].abs() / &lead;
            if k == n {
                ratio /= Rational::from_integer(2.into());
            }
            if ratio.is_zero() {
                continue;
            }
            // smallest e with (2^e)^k ≥ ratio
            let mut e = 0u32;
            while Rational::from_integer(BigInt::one() << (e as usize * k)) < ratio {
                e += 1;
            }
            exp = exp.max(e);
        }
        Rational::from_integer(BigInt::one() << (exp as usize + 1)) + Rational::one()
    }

    /// Disjoint open intervals with rational non-root endpoints, each containing exactly one
    /// real root, in increasing order.
    pub fn isolate_real_roots(&self) -> Result<Vec<(Rational, Rational)>> {
        if self.is_zero() {
            return Err(Error::Degenerate("zero polynomial has infinitely many roots".into()));
        }
        let sf = self.squarefree_part();
        if sf.is_constant() {
            return Ok(Vec::new());
        }
        let b = sf.root_bound();
        let chain = sf.sturm_chain();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = variations(chain.iter().map(|p| p.sign_at(&lo)))
                - variations(chain.iter().map(|p| p.sign_at(&hi)));
            match n {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = split_point(&sf, &lo, &hi);
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Shrinks an isolating interval until its width is at most `width`.
    pub fn refine_root(
        &self,
        (mut lo, mut hi): (Rational, Rational),
        width: &Rational,
    ) -> (Rational, Rational) {
        let slo = self.sign_at(&lo);
        while &(&hi - &lo) > width {
            let mid = split_point(self, &lo, &hi);
            if self.sign_at(&mid) == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

/// A point strictly inside `(lo, hi)` that is not a root of `p`: the midpoint, or a point
/// slightly to its right when the midpoint is a root.
fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let half = (lo + hi) / Rational::from_integer(2.into());
    let mut step = (hi - lo) / Rational::from_integer(4.into());
    let mut mid = half.clone();
    while p.eval(&mid).is_zero() {
        step /= Rational::from_integer(2.into());
        mid = &half + &step;
    }
    mid
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a nonzero polynomial, via a Sturm chain on its
/// squarefree part.
pub fn sturm_real_root_count(p: &UniPoly) -> Result<usize> {
    p.count_real_roots()
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
