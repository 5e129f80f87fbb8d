use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::Matrix;
use super::rational::{binomial, serde_rational, Rational};
use super::ring::{GradedForm, Multidegree, Ring};
use super::scalar::CommRing;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Homogeneous binary form `Σ coeffs[i]·x^(n−i)·y^i` of formal degree `n = coeffs.len() − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<T> {
    coeffs: Vec<T>,
}

impl<T: CommRing> BinaryForm<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension("binary form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CommRing::vanishes)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Substitutes `y → y + t·x`, a determinant-one change of coordinates.
    pub fn shear(&self, t: i64) -> Self {
        let n = self.degree();
        let tt = self.coeffs[0].from_i64_like(t);
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = self.coeffs[0].zero_like();
                let mut tpow = self.coeffs[0].one_like();
                for i in k..=n {
                    let b = binomial(i as u32, k as u32);
                    let b = self.coeffs[0].from_i64_like(i64::try_from(b).expect("small binomial"));
                    acc = acc.add(&self.coeffs[i].mul(&b).mul(&tpow));
                    tpow = tpow.mul(&tt);
                }
                acc
            })
            .collect();
        BinaryForm { coeffs }
    }
}

impl BinaryForm<Rational> {
    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// Reads a form over a single two-variable block.
    pub fn from_graded(f: &GradedForm) -> Result<Self> {
        let ring = f.ring();
        if ring.block_sizes() != [2] || !ring.params().is_empty() {
            return Err(Error::Shape(format!("expected a binary ring, got {ring}")));
        }
        let n = f.degree().0[0];
        Self::new(
            (0..=n)
                .map(|i| f.coefficient(&[n - i, i]))
                .collect(),
        )
    }

    pub fn to_graded(&self, ring: Arc<Ring>) -> Result<GradedForm> {
        if ring.block_sizes() != [2] {
            return Err(Error::Shape(format!("expected a binary ring, got {ring}")));
        }
        let n = self.degree() as u32;
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; ring.nvars()];
            e[0] = n - i as u32;
            e[1] = i as u32;
            (e, c.clone())
        });
        GradedForm::from_terms(ring.clone(), Multidegree::new(&[n]), terms.collect::<Vec<_>>())
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let n = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c * num_traits::pow(x.clone(), n - i) * num_traits::pow(y.clone(), i)
            })
            .sum()
    }

    /// `F(x, 1)` as a univariate polynomial in `x`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Exact description of the real zeros and signs of the form on ℝ².
    pub fn real_sign_analysis(&self) -> Result<RealSignAnalysis> {
        if self.is_zero() {
            return Err(Error::Degenerate("zero binary form".into()));
        }
        let n = self.degree();
        let q = self.dehomogenize();
        let at_infinity = self.coeffs[0].is_zero();
        let intervals = q.isolate_real_roots()?;
        let mut samples: Vec<Rational> = Vec::new();
        for (lo, hi) in &intervals {
            samples.push(lo.clone());
            samples.push(hi.clone());
        }
        if samples.is_empty() {
            samples.push(Rational::zero());
        }
        let mut negative_witness = None;
        let mut has_positive = false;
        let even = n.is_multiple_of(2);
        for s in &samples {
            let v = q.eval(s);
            if v.is_negative() || (!even && v.is_positive()) {
                let point = if v.is_negative() { s.clone() } else { -s.clone() };
                negative_witness.get_or_insert((point, Rational::one()));
                has_positive |= !even;
            }
            has_positive |= v.is_positive();
        }
        let lead = &self.coeffs[0];
        if lead.is_negative() || (!even && lead.is_positive()) {
            let x = if lead.is_negative() { Rational::one() } else { -Rational::one() };
            negative_witness.get_or_insert((x, Rational::zero()));
        }
        has_positive |= lead.is_positive();
        Ok(RealSignAnalysis {
            degree: n,
            real_roots: intervals.len() + usize::from(at_infinity),
            root_at_infinity: at_infinity,
            squarefree: q.is_squarefree() && (!at_infinity || n < 2 || !self.coeffs[1].is_zero()),
            has_positive,
            negative_witness,
            root_intervals: intervals
                .into_iter()
                .map(|(lo, hi)| RootInterval { lo, hi })
                .collect(),
        })
    }
}

/// Open interval `(lo, hi)` of the affine chart `y = 1` containing exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealSignAnalysis {
    pub degree: usize,
    /// Distinct real projective roots, including `[1:0]` when present.
    pub real_roots: usize,
    pub root_at_infinity: bool,
    pub squarefree: bool,
    pub has_positive: bool,
    /// A real point `(x, y)` where the form is strictly negative.
    #[serde(serialize_with = "ser_point")]
    pub negative_witness: Option<(Rational, Rational)>,
    pub root_intervals: Vec<RootInterval>,
}

fn ser_point<S: serde::Serializer>(
    p: &Option<(Rational, Rational)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    p.as_ref()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .serialize(s)
}

impl RealSignAnalysis {
    pub fn has_negative(&self) -> bool {
        self.negative_witness.is_some()
    }
}

/// Discriminant `(−1)^(n(n−1)/2)·Res(p, p′)/a₀` of a binary form of degree `n ≥ 2`, where
/// `p` is the dehomogenisation in `y` and `a₀` the `xⁿ` coefficient. With this scaling
/// `ax² + bxy + cy²` has discriminant `b² − 4ac`. When `a₀ = 0` the form is first sheared by
/// `y → y + t·x`, which leaves the discriminant unchanged.
pub fn discriminant<T: CommRing>(p: &BinaryForm<T>) -> Result<T> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall { got: n, need: 2 });
    }
    let zero = p.coeffs[0].zero_like();
    if p.is_zero() {
        return Ok(zero);
    }
    let form = if p.coeffs[0].vanishes() {
        (1..=n as i64 + 1)
            .map(|t| p.shear(t))
            .find(|q| !q.coeffs[0].vanishes())
            .expect("a nonzero form of degree n is nonzero at one of n+1 points")
    } else {
        p.clone()
    };
    let a = &form.coeffs;
    let deriv: Vec<T> = (0..n)
        .map(|i| a[i].mul(&a[0].from_i64_like((n - i) as i64)))
        .collect();
    let size = 2 * n - 1;
    let sylvester = Matrix::from_fn(size, size, |r, c| {
        if r < n - 1 {
            c.checked_sub(r).and_then(|k| a.get(k)).cloned().unwrap_or_else(|| zero.clone())
        } else {
            let r = r - (n - 1);
            c.checked_sub(r).and_then(|k| deriv.get(k)).cloned().unwrap_or_else(|| zero.clone())
        }
    });
    let res = sylvester.det_bareiss()?;
    let disc = res
        .div_exact(&a[0])
        .ok_or_else(|| Error::Degenerate("resultant not divisible by leading coefficient".into()))?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { disc.neg() } else { disc })
}

/// True iff the even-degree form is strictly positive on ℝ² minus the origin: its `xⁿ`
/// coefficient is positive, its dehomogenisation has no real root and is positive at 0.
pub fn binary_form_positive(p: &BinaryForm<Rational>) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero binary form".into()));
    }
    if p.degree() % 2 == 1 {
        return Err(Error::Shape(format!("odd degree {} cannot be definite", p.degree())));
    }
    if !p.coeffs[0].is_positive() {
        return Ok(false);
    }
    let q = p.dehomogenize();
    Ok(q.count_real_roots()? == 0 && q.eval(&Rational::zero()).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Poly;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    fn form(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::from_i64(c).unwrap()
    }

    #[test]
    fn quadratic_convention() {
        // symbolic a x^2 + b xy + c y^2
        let v = |i| Poly::var(3, i);
        let f = BinaryForm::new(vec![v(0), v(1), v(2)]).unwrap();
        let d = discriminant(&f).unwrap();
        let expected = &(&v(1) * &v(1)) - &(&v(0) * &v(2)).scale(&rat(4));
        assert_eq!(d, expected);
    }

    #[test]
    fn double_root_and_degree() {
        // (x - y)^2 x = x^3 - 2x^2 y + x y^2
        assert_eq!(discriminant(&form(&[1, -2, 1, 0])).unwrap(), rat(0));
        assert!(matches!(
            discriminant(&form(&[1, 1])),
            Err(Error::DegreeTooSmall { got: 1, need: 2 })
        ));
        // leading coefficient zero: x y (x + y) shape with a0 = 0, i.e. x^2 y + x y^2
        assert_eq!(discriminant(&form(&[0, 1, 1, 0])).unwrap(), rat(1));
        assert_eq!(discriminant(&form(&[1, 1, 0, 0])).unwrap(), rat(0));
    }

    #[test]
    fn shear_preserves_discriminant() {
        let f = form(&[2, -3, 0, 5, 1]);
        assert_eq!(discriminant(&f).unwrap(), discriminant(&f.shear(3)).unwrap());
    }

    #[test]
    fn positivity() {
        let x2y2 = form(&[1, 0, 1]);
        for d in 1..4u32 {
            let mut p = form(&[1]);
            for _ in 0..d {
                p = p.mul(&x2y2);
            }
            assert!(binary_form_positive(&p).unwrap());
        }
        assert!(!binary_form_positive(&form(&[0, 0, 1, 0, 0])).unwrap());
        assert!(!binary_form_positive(&form(&[1, 0, 0, 0, -1])).unwrap());
        assert!(binary_form_positive(&form(&[0, 0, 0])).is_err());
    }

    #[test]
    fn sign_analysis_finds_negative_points() {
        let a = form(&[1, 0, 0, 0, -1]).real_sign_analysis().unwrap();
        assert_eq!(a.real_roots, 2);
        let (x, y) = a.negative_witness.clone().unwrap();
        assert!(form(&[1, 0, 0, 0, -1]).eval(&x, &y).is_negative());
        let b = form(&[-1, 0, 1]).real_sign_analysis().unwrap();
        assert!(b.has_negative());
        let c = form(&[0, 0, 1]).real_sign_analysis().unwrap();
        assert!(!c.has_negative());
        assert!(c.root_at_infinity);
        assert!(!c.squarefree);
    }

    proptest! {
        #[test]
        fn discriminant_detects_repeated_roots(c in prop::collection::vec(-5i64..=5, 3..=9)) {
            let f = form(&c);
            prop_assume!(!f.is_zero());
            let d = discriminant(&f).unwrap();
            let q = f.dehomogenize();
            let n = f.degree();
            // projective repeated root: affine repeated root, or a double root at infinity
            let repeated = !q.is_squarefree() || n >= q.degree().unwrap_or(0) + 2;
            prop_assert_eq!(d.is_zero(), repeated);
        }
    }
}
