//! Matrix pencils, hyperdeterminants of `2×n×n` and `2×2×2×2` tensors by slicing
//! (the discriminant of the pencil determinant), and the real-rank decision for `2×n×n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{
    det_symbolic, discriminant, format_rational, rat, serde_rational, BinaryForm, CommRing,
    ExactMatrix, GradedForm, Matrix, Multidegree, Poly, Rational, Ring, UniPoly,
};

/// Two `n×n` slices `T1, T2` of a tensor in `R²⊗Rⁿ⊗Rⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pencil {
    n: usize,
    #[serde(rename = "T1")]
    t1: ExactMatrix,
    #[serde(rename = "T2")]
    t2: ExactMatrix,
    symmetric: bool,
}

impl Pencil {
    pub fn new(t1: ExactMatrix, t2: ExactMatrix) -> Result<Self> {
        let n = t1.rows();
        if n == 0 || !t1.is_square() {
            return Err(Error::Dimension(format!(
                "pencil slices must be square and nonempty, got {}x{}",
                t1.rows(),
                t1.cols()
            )));
        }
        if t2.rows() != n || t2.cols() != n {
            return Err(Error::Dimension(format!(
                "slices of different shapes: {n}x{n} and {}x{}",
                t2.rows(),
                t2.cols()
            )));
        }
        Ok(Pencil { n, t1, t2, symmetric: false })
    }

    /// Pencil whose slices are both symmetric; the flag is carried into serialisation.
    pub fn new_symmetric(t1: ExactMatrix, t2: ExactMatrix) -> Result<Self> {
        let mut p = Self::new(t1, t2)?;
        if !p.t1.is_symmetric() || !p.t2.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        p.symmetric = true;
        Ok(p)
    }

    pub fn from_i64(t1: &[&[i64]], t2: &[&[i64]]) -> Result<Self> {
        Self::new(ExactMatrix::from_i64(t1)?, ExactMatrix::from_i64(t2)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t1(&self) -> &ExactMatrix {
        &self.t1
    }

    pub fn t2(&self) -> &ExactMatrix {
        &self.t2
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `(P·T1·Q, P·T2·Q)`.
    pub fn transform(&self, p: &ExactMatrix, q: &ExactMatrix) -> Result<Pencil> {
        let t1 = p.mul(&self.t1)?.mul(q)?;
        let t2 = p.mul(&self.t2)?.mul(q)?;
        Pencil::new(t1, t2)
    }
}

/// Coefficients of `det(a1·T1 + a2·T2)` for slices over any exact ring. The coefficient of
/// `a1^(n−k)·a2^k` is the sum of the determinants taking `k` columns from `T2` and the rest
/// from `T1` (multilinearity in the columns).
pub fn pencil_form_generic<T: CommRing>(t1: &Matrix<T>, t2: &Matrix<T>) -> Result<BinaryForm<T>> {
    let n = t1.rows();
    if n == 0 || !t1.is_square() || t2.rows() != n || t2.cols() != n {
        return Err(Error::Dimension("pencil slices must be square of equal size".into()));
    }
    if n > 20 {
        return Err(Error::Unsupported(format!("pencil of size {n} is too large")));
    }
    let zero = t1.get(0, 0).zero_like();
    let mut coeffs = vec![zero; n + 1];
    for mask in 0u32..(1 << n) {
        let m = Matrix::from_fn(n, n, |i, j| {
            if mask >> j & 1 == 1 {
                t2.get(i, j).clone()
            } else {
                t1.get(i, j).clone()
            }
        });
        let d = m.det_bareiss()?;
        let k = mask.count_ones() as usize;
        coeffs[k] = coeffs[k].add(&d);
    }
    BinaryForm::new(coeffs)
}

/// `p_T(a1, a2) = det(a1·T1 + a2·T2)`, coefficients listed from `a1ⁿ` down to `a2ⁿ`.
pub fn pencil_form(t: &Pencil) -> BinaryForm<Rational> {
    pencil_form_generic(&t.t1, &t.t2).expect("pencil shape validated at construction")
}

/// Renders a pencil form in `a1, a2`.
pub fn format_pencil_form(p: &BinaryForm<Rational>) -> String {
    let ring = Ring::new(&[&["a1", "a2"]]).expect("fixed names");
    match p.to_graded(ring) {
        Ok(g) if !g.is_zero() => g.to_string(),
        _ => "0".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperdetValue {
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// The pencil form vanishes identically.
    pub degenerate: bool,
}

impl HyperdetValue {
    pub fn is_zero(&self) -> bool {
        self.value.vanishes()
    }
}

/// Discriminant of the pencil form. Needs `n ≥ 2`.
pub fn hyperdet_2nn(t: &Pencil) -> Result<HyperdetValue> {
    let p = pencil_form(t);
    if p.is_zero() {
        return Ok(HyperdetValue { value: rat(0), degenerate: true });
    }
    Ok(HyperdetValue { value: discriminant(&p)?, degenerate: false })
}

/// `2×2×2` case: the discriminant `b² − 4ac` of the quadratic pencil form.
pub fn hyperdet_222(u: &Pencil) -> Result<Rational> {
    if u.n != 2 {
        return Err(Error::Dimension(format!("expected 2x2 slices, got {}x{}", u.n, u.n)));
    }
    discriminant(&pencil_form(u))
}

/// The `2×2×2` hyperdeterminant as a polynomial in 8 variables `u_{ijk}` (variable index
/// `4i + 2j + k`), computed by the same slicing over the polynomial ring.
pub fn hyperdet_222_symbolic() -> Poly {
    let u = |i: usize, j: usize, k: usize| Poly::var(8, 4 * i + 2 * j + k);
    let t1 = Matrix::from_fn(2, 2, |j, k| u(0, j, k));
    let t2 = Matrix::from_fn(2, 2, |j, k| u(1, j, k));
    let p = pencil_form_generic(&t1, &t2).expect("2x2 slices");
    discriminant(&p).expect("quadratic form")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BergqvistVerdict {
    #[serde(rename = "RANK_N")]
    RankN,
    #[serde(rename = "RANK_N_PLUS_1")]
    RankNPlus1,
    #[serde(rename = "BOUNDARY")]
    Boundary,
}

impl fmt::Display for BergqvistVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BergqvistVerdict::RankN => "RANK_N",
            BergqvistVerdict::RankNPlus1 => "RANK_N_PLUS_1",
            BergqvistVerdict::Boundary => "BOUNDARY",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BergqvistReport {
    pub verdict: BergqvistVerdict,
    pub n: usize,
    /// Real rank implied by the verdict; absent on the boundary.
    pub real_rank: Option<usize>,
    #[serde(serialize_with = "ser_form")]
    pub pencil_form: BinaryForm<Rational>,
    #[serde(with = "serde_rational::opt")]
    pub discriminant: Option<Rational>,
    /// Distinct real projective roots of the pencil form, counting `[1:0]`.
    pub real_roots: Option<usize>,
    pub root_at_infinity: bool,
}

fn ser_form<S: Serializer>(p: &BinaryForm<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_pencil_form(p))
}

/// Real rank of a general real `2×n×n` tensor: `n` iff the pencil form has `n` distinct
/// real projective roots, `n+1` if it is squarefree with fewer. Forms with a repeated root
/// (or vanishing identically) lie on the hyperdeterminant and get `BOUNDARY`.
pub fn bergqvist_real_rank(t: &Pencil) -> Result<BergqvistReport> {
    let n = t.n;
    let p = pencil_form(t);
    let boundary = |p: BinaryForm<Rational>, disc: Option<Rational>| BergqvistReport {
        verdict: BergqvistVerdict::Boundary,
        n,
        real_rank: None,
        root_at_infinity: !p.is_zero() && p.coeffs()[0].vanishes(),
        pencil_form: p,
        discriminant: disc,
        real_roots: None,
    };
    if p.is_zero() {
        return Ok(boundary(p, None));
    }
    let disc = if n >= 2 { Some(discriminant(&p)?) } else { None };
    if disc.as_ref().is_some_and(CommRing::vanishes) {
        return Ok(boundary(p, disc));
    }
    let analysis = p.real_sign_analysis()?;
    let (verdict, real_rank) = if analysis.real_roots == n {
        (BergqvistVerdict::RankN, n)
    } else {
        (BergqvistVerdict::RankNPlus1, n + 1)
    };
    Ok(BergqvistReport {
        verdict,
        n,
        real_rank: Some(real_rank),
        pencil_form: p,
        discriminant: disc,
        real_roots: Some(analysis.real_roots),
        root_at_infinity: analysis.root_at_infinity,
    })
}

fn check_lambdas(lambda: &[Rational]) -> Result<usize> {
    if lambda.is_empty() {
        return Err(Error::Dimension("need at least one eigenvalue (n >= 2)".into()));
    }
    Ok(lambda.len() + 1)
}

/// `T1 = Id`, `T2` = a Jordan block at `λ1` followed by `diag(λ2, …, λ_{n−1})`.
pub fn tangential_join_sample(lambda: &[Rational]) -> Result<Pencil> {
    let n = check_lambdas(lambda)?;
    let t2 = ExactMatrix::from_fn(n, n, |i, j| {
        let k = i.saturating_sub(1);
        if i == j {
            lambda[k].clone()
        } else if i == 0 && j == 1 {
            rat(1)
        } else {
            rat(0)
        }
    });
    Pencil::new(ExactMatrix::identity(n), t2)
}

/// Symmetric analogue over the rationals: the leading `2×2` blocks are `[[0,1],[1,0]]` and
/// `[[1,λ1],[λ1,0]]`, whose pencil determinant is `−(a1 + λ1·a2)²`; the rest is
/// `Id` and `diag(λ2, …)`.
pub fn symmetric_tangential_sample(lambda: &[Rational]) -> Result<Pencil> {
    let n = check_lambdas(lambda)?;
    let t1 = ExactMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 1) | (1, 0) => rat(1),
        (0, 0) | (1, 1) => rat(0),
        _ if i == j => rat(1),
        _ => rat(0),
    });
    let t2 = ExactMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => rat(1),
        (0, 1) | (1, 0) => lambda[0].clone(),
        (1, 1) => rat(0),
        _ if i == j => lambda[i - 1].clone(),
        _ => rat(0),
    });
    Pencil::new_symmetric(t1, t2)
}

/// A `2×2×2×2` tensor with entries `z_{ijkl}` stored at index `8i + 4j + 2k + l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor2222 {
    entries: Vec<Rational>,
}

impl Serialize for Tensor2222 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational::vec::serialize(&self.entries, s)
    }
}

impl Tensor2222 {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != 16 {
            return Err(Error::Dimension(format!("expected 16 entries, got {}", entries.len())));
        }
        Ok(Tensor2222 { entries })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&v| rat(v)).collect())
    }

    pub fn zero() -> Self {
        Tensor2222 { entries: vec![rat(0); 16] }
    }

    pub fn index(i: usize, j: usize, k: usize, l: usize) -> usize {
        8 * i + 4 * j + 2 * k + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        &self.entries[Self::index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Rational) {
        self.entries[Self::index(i, j, k, l)] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Sum of decomposable tensors `a ⊗ b ⊗ c ⊗ d`.
    pub fn from_decomposables(terms: &[[[Rational; 2]; 4]]) -> Self {
        let mut t = Self::zero();
        for [a, b, c, d] in terms {
            for idx in 0..16 {
                let (i, j, k, l) = (idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1);
                t.entries[idx] += &a[i] * &b[j] * &c[k] * &d[l];
            }
        }
        t
    }

    /// Entries permuted by a permutation of the four tensor factors: the new factor `m` is
    /// the old factor `perm[m]`.
    pub fn permute_factors(&self, perm: [usize; 4]) -> Self {
        let mut t = Self::zero();
        for idx in 0..16 {
            let old = [idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1];
            let mut new = [0; 4];
            for m in 0..4 {
                new[m] = old[perm[m]];
            }
            t.set(new[0], new[1], new[2], new[3], self.entries[idx].clone());
        }
        t
    }
}

/// `p(w)`: the `2×2×2` hyperdeterminant of `u_{ijk} = z_{ijk0} + z_{ijk1}·w`.
pub fn quartic_2222(z: &Tensor2222) -> UniPoly {
    let w = Poly::var(1, 0);
    let u = |i: usize, j: usize, k: usize| {
        &Poly::constant(1, z.get(i, j, k, 0).clone()) + &w.scale(z.get(i, j, k, 1))
    };
    let t1 = Matrix::from_fn(2, 2, |j, k| u(0, j, k));
    let t2 = Matrix::from_fn(2, 2, |j, k| u(1, j, k));
    let p = pencil_form_generic(&t1, &t2).expect("2x2 slices");
    let p = discriminant(&p).expect("quadratic form");
    UniPoly::new((0..=4).map(|e| p.coefficient(&[e])).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperdet2222 {
    #[serde(serialize_with = "ser_unipoly")]
    pub p: UniPoly,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// `p(w)` vanishes identically.
    pub degenerate: bool,
}

fn ser_unipoly<S: Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Discriminant of `p(w)` read as a binary quartic (a degree drop is a root at infinity).
pub fn hyperdet_2222(z: &Tensor2222) -> Hyperdet2222 {
    let p = quartic_2222(z);
    if p.is_zero() {
        return Hyperdet2222 { p, value: rat(0), degenerate: true };
    }
    let form = BinaryForm::new((0..=4).rev().map(|e| p.coeff(e)).collect())
        .expect("five coefficients");
    let value = discriminant(&form).expect("quartic");
    Hyperdet2222 { p, value, degenerate: false }
}

/// The `3×3×3` example: the tensor
/// `(λ01·a0+λ11·a1)⊗b2⊗c2 + a2⊗(λ02·b0+λ12·b1)⊗c2 + a2⊗b2⊗(λ03·c0+λ13·c1) + Σ aᵢ⊗bᵢ⊗cᵢ`
/// contracted with `a`, as a `3×3` matrix of linear forms in `a0, a1, a2` with the `λ`'s as
/// parameters. Its determinant is the ternary cubic `p_T`.
pub fn example_333_matrix() -> Matrix<GradedForm> {
    let ring = Ring::with_params(
        &[&["a0", "a1", "a2"]],
        &["l01", "l11", "l02", "l12", "l03", "l13"],
    )
    .expect("fixed names");
    let v = |name: &str| ring.var(name).expect("declared");
    let lin = |p: Poly| GradedForm::new(ring.clone(), Multidegree::new(&[1]), p).expect("linear");
    let zero = GradedForm::zero(ring.clone(), Multidegree::new(&[1]));
    let (a0, a1, a2) = (v("a0"), v("a1"), v("a2"));
    let corner = &(&(&v("l01") * &a0) + &(&v("l11") * &a1)) + &a2;
    let rows = vec![
        vec![lin(a0.clone()), zero.clone(), lin(&v("l02") * &a2)],
        vec![zero, lin(a1.clone()), lin(&v("l12") * &a2)],
        vec![lin(&v("l03") * &a2), lin(&v("l13") * &a2), lin(corner)],
    ];
    Matrix::from_rows(rows).expect("3x3")
}

/// `p_T` of the `3×3×3` example via [`det_symbolic`].
pub fn example_333_cubic() -> Result<GradedForm> {
    det_symbolic(&example_333_matrix())
}

/// Entries of a pencil in a readable form, used by error messages and reports.
pub fn describe_pencil(t: &Pencil) -> String {
    let show = |m: &ExactMatrix| {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    };
    format!("T1=[{}] T2=[{}]", show(&t.t1), show(&t.t2))
}
