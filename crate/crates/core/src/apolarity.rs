//! The differentiation pairing between a Cox ring and its dual, toric catalecticants and
//! apolar ideals of binary forms.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    discriminant, multi_factorial, BinaryForm, ExactMatrix, Exponents, GradedForm, Multidegree,
    Poly, Rational, Ring,
};

/// All monomials of one multidegree, block 1 outermost and lexicographically decreasing
/// inside each block (`x² > xy > xz > y² > …`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    ring: Arc<Ring>,
    degree: Multidegree,
    monomials: Vec<Exponents>,
}

impl MonomialBasis {
    pub fn new(ring: Arc<Ring>, degree: &Multidegree) -> Result<Self> {
        if degree.len() != ring.num_blocks() {
            return Err(Error::Dimension(format!(
                "multidegree {degree} for {} blocks",
                ring.num_blocks()
            )));
        }
        let mut monomials: Vec<Exponents> = vec![vec![0; ring.nvars()]];
        for (b, &k) in degree.parts().iter().enumerate() {
            let range = ring.block_range(b);
            let block = block_monomials(range.len(), k);
            monomials = monomials
                .iter()
                .flat_map(|prefix| {
                    let range = range.clone();
                    block.iter().map(move |m| {
                        let mut e = prefix.clone();
                        e[range.clone()].copy_from_slice(m);
                        e
                    })
                })
                .collect();
        }
        Ok(MonomialBasis {
            ring,
            degree: degree.clone(),
            monomials,
        })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Exponents] {
        &self.monomials
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m == exps)
    }

    pub fn labels(&self, ring: &Ring) -> Vec<String> {
        self.monomials.iter().map(|m| ring.format_monomial(m)).collect()
    }

    /// The form `Σ vᵢ·mᵢ` over `ring` (which must have this basis' shape).
    pub fn combination(&self, ring: Arc<Ring>, v: &[Rational]) -> Result<GradedForm> {
        if !ring.same_shape(&self.ring) || v.len() != self.len() {
            return Err(Error::Dimension("basis combination".into()));
        }
        let terms: Vec<(Exponents, Rational)> = self
            .monomials
            .iter()
            .cloned()
            .zip(v.iter().cloned())
            .collect();
        GradedForm::from_terms(ring, self.degree.clone(), terms)
    }
}

/// Monomials of degree `k` in `m` variables, lexicographically decreasing.
fn block_monomials(m: usize, k: u32) -> Vec<Vec<u32>> {
    if m == 1 {
        return vec![vec![k]];
    }
    (0..=k)
        .rev()
        .flat_map(|first| {
            block_monomials(m - 1, k - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Applies the differential operator `g` to `f`: each variable of `g` acts as the partial
/// derivative in the corresponding variable of `f`, without factorial normalisation.
pub fn apolar_apply(g: &GradedForm, f: &GradedForm) -> Result<GradedForm> {
    if !g.ring().same_shape(f.ring()) {
        return Err(Error::RingMismatch(format!("{} vs {}", g.ring(), f.ring())));
    }
    let rest = f.degree().checked_sub(g.degree()).ok_or_else(|| Error::Order {
        sup: f.degree().clone(),
        sub: g.degree().clone(),
    })?;
    let mut acc = Poly::zero(f.ring().nvars());
    for (e, c) in g.poly().terms() {
        acc = &acc + &f.poly().differentiate(e).scale(c);
    }
    GradedForm::new(f.ring().clone(), rest, acc)
}

/// Matrix of the pairing `T_B → S_{A−B}, g ↦ g(f)`.
///
/// Row `α` (a monomial operator `∂^α` of `T_B`) and column `β` (a monomial of `S_{A−B}`)
/// hold `∂^β ∂^α f = (α+β)!·f_{α+β}`, i.e. the column monomial's coefficient of `∂^α f`
/// weighted by `β!`. The weight makes the matrix symmetric for `A = 2B` and reproduces the
/// standard catalecticant of the worked `(2,2)` example.
#[derive(Clone, Debug)]
pub struct CatalecticantMatrix {
    pub matrix: ExactMatrix,
    pub row_basis: MonomialBasis,
    pub col_basis: MonomialBasis,
    pub source: GradedForm,
    pub b: Multidegree,
}

impl CatalecticantMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_square(&self) -> bool {
        self.matrix.is_square()
    }

    pub fn det(&self) -> Result<Rational> {
        self.matrix.det()
    }

    /// Coefficient vectors (in the row basis) of the operators annihilating the source form:
    /// the left null space of the matrix, with primitive integer entries.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        self.matrix.left_kernel()
    }

    /// The kernel as operators over the dual ring, i.e. the degree-`B` slice of `f^⊥`.
    pub fn kernel_forms(&self) -> Result<Vec<GradedForm>> {
        let dual = self.source.ring().dual();
        self.kernel()
            .iter()
            .map(|v| self.row_basis.combination(dual.clone(), v))
            .collect()
    }

    pub fn to_json(&self) -> CatalecticantJson {
        let ring = self.source.ring();
        CatalecticantJson {
            rows: self.matrix.rows(),
            cols: self.matrix.cols(),
            row_basis: self.row_basis.labels(&ring.dual()),
            col_basis: self.col_basis.labels(ring),
            entries: self
                .matrix
                .entries()
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalecticantJson {
    pub rows: usize,
    pub cols: usize,
    pub row_basis: Vec<String>,
    pub col_basis: Vec<String>,
    pub entries: Vec<String>,
}

pub fn catalecticant(f: &GradedForm, b: &Multidegree) -> Result<CatalecticantMatrix> {
    if !f.is_numeric() {
        return Err(Error::Unsupported(
            "catalecticant of a form with symbolic coefficients".into(),
        ));
    }
    let ring = f.ring().clone();
    let rest = f.degree().checked_sub(b).ok_or_else(|| Error::Order {
        sup: f.degree().clone(),
        sub: b.clone(),
    })?;
    let row_basis = MonomialBasis::new(ring.clone(), b)?;
    let col_basis = MonomialBasis::new(ring.clone(), &rest)?;
    let matrix = ExactMatrix::from_fn(row_basis.len(), col_basis.len(), |i, j| {
        let sum: Exponents = row_basis.monomials[i]
            .iter()
            .zip(&col_basis.monomials[j])
            .map(|(a, c)| a + c)
            .collect();
        let c = f.coefficient(&sum);
        if c.is_zero() {
            c
        } else {
            c * Rational::from_integer(multi_factorial(&sum))
        }
    });
    Ok(CatalecticantMatrix {
        matrix,
        row_basis,
        col_basis,
        source: f.clone(),
        b: b.clone(),
    })
}

/// Generic complex X-rank for the supported ambients: `P¹×P¹` with any `A = (u,v)`, and
/// `Pⁿ×P¹` with `A = (2,2d)`.
pub fn generic_rank(block_sizes: &[usize], a: &Multidegree) -> Result<usize> {
    let p = a.parts();
    match (block_sizes, p) {
        ([2, 2], &[u, v]) if u > 0 && v > 0 => {
            let (u, v) = (u as usize, v as usize);
            if u == 2 && v % 2 == 0 {
                Ok(v + 2)
            } else if v == 2 && u % 2 == 0 {
                Ok(u + 2)
            } else {
                Ok(((u + 1) * (v + 1)).div_ceil(3))
            }
        }
        ([n1, 2], &[2, v]) if *n1 >= 2 && v > 0 && v % 2 == 0 => Ok((v as usize / 2 + 1) * n1),
        _ => Err(Error::Unsupported(format!(
            "generic rank for blocks {block_sizes:?} and A = {a}"
        ))),
    }
}

fn require_binary(f: &GradedForm) -> Result<u32> {
    let ring = f.ring();
    if ring.block_sizes() != [2] || !ring.params().is_empty() {
        return Err(Error::Shape(format!("expected a binary form, got ring {ring}")));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("zero binary form".into()));
    }
    Ok(f.degree().0[0])
}

/// Degree-`k` slice of `f^⊥` for a binary form of degree `d`, as coefficient vectors in the
/// degree-`k` monomial basis.
fn binary_slice(f: &GradedForm, k: u32) -> Result<(MonomialBasis, Vec<Vec<Rational>>)> {
    let d = f.degree().0[0];
    let basis = MonomialBasis::new(f.ring().clone(), &Multidegree::new(&[k]))?;
    if k > d {
        let n = basis.len();
        let all = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        return Ok((basis, all));
    }
    let cat = catalecticant(f, &Multidegree::new(&[k]))?;
    Ok((basis, cat.kernel()))
}

/// Minimal generators `(g₁, g₂)` of `f^⊥` with `deg g₁ ≤ deg g₂` and
/// `deg g₁ + deg g₂ = d + 2`, as operators over the dual ring.
pub fn binary_apolar_generators(f: &GradedForm) -> Result<(GradedForm, GradedForm)> {
    let d = require_binary(f)?;
    let dual = f.ring().dual();
    let (d1, basis1, kernel1) = (1..=d + 1)
        .map(|k| binary_slice(f, k).map(|(b, ker)| (k, b, ker)))
        .find(|r| r.as_ref().map_or(true, |(_, _, ker)| !ker.is_empty()))
        .expect("T_(d+1) annihilates f")?;
    let d2 = d + 2 - d1;
    let g1 = basis1.combination(dual.clone(), &kernel1[0])?;
    if d1 == d2 {
        let g2 = basis1.combination(dual, &kernel1[1])?;
        return Ok((g1, g2));
    }
    // second generator: a degree-d2 annihilator outside the ideal generated by g1
    let (basis2, kernel2) = binary_slice(f, d2)?;
    let shift = MonomialBasis::new(dual.clone(), &Multidegree::new(&[d2 - d1]))?;
    let multiples: Vec<Vec<Rational>> = shift
        .monomials()
        .iter()
        .map(|m| {
            let p = g1.poly().mul_monomial(m, &Rational::one());
            basis2.monomials().iter().map(|e| p.coefficient(e)).collect()
        })
        .collect();
    let span = ExactMatrix::from_rows(multiples)?;
    let (reduced, pivots) = span.rref();
    for v in &kernel2 {
        let mut r = v.clone();
        for (row, &p) in pivots.iter().enumerate() {
            let c = r[p].clone();
            if !c.is_zero() {
                for (j, x) in r.iter_mut().enumerate() {
                    *x -= &c * reduced.get(row, j);
                }
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            let r: Vec<Rational> = crate::exactalg::primitive_integer_vector(&r)
                .iter()
                .map(crate::exactalg::int)
                .collect();
            let g2 = basis2.combination(dual, &r)?;
            return Ok((g1, g2));
        }
    }
    Err(Error::Degenerate(
        "no second generator found; slice dimensions are inconsistent".into(),
    ))
}

fn is_squarefree_binary(g: &GradedForm) -> Result<bool> {
    let bf = BinaryForm::from_graded(g)?;
    if bf.degree() < 2 {
        return Ok(true);
    }
    Ok(!discriminant(&bf)?.is_zero())
}

/// Complex Waring rank of a binary form by Sylvester's criterion.
pub fn binary_rank_complex(f: &GradedForm) -> Result<usize> {
    let d = require_binary(f)? as usize;
    let (g1, g2) = binary_apolar_generators(f)?;
    let d1 = g1.degree().0[0] as usize;
    if d1 == g2.degree().0[0] as usize || is_squarefree_binary(&g1)? {
        Ok(d1)
    } else {
        Ok(d + 2 - d1)
    }
}

/// True iff `f` has complex rank `d` and is not a `d`-th power.
pub fn tangential_membership_binary(f: &GradedForm) -> Result<bool> {
    let d = require_binary(f)? as usize;
    if d < 2 {
        return Err(Error::DegreeTooSmall { got: d, need: 2 });
    }
    let rank = binary_rank_complex(f)?;
    Ok(rank == d && rank != 1)
}

/// True iff some nonzero element of the degree-`d` slice of `f^⊥` is divisible by `L²`, where
/// `L` is the linear operator vanishing at the point `ℓ = [l₀ : l₁]`.
pub fn rs_witness_binary(f: &GradedForm, point: &[Rational]) -> Result<bool> {
    let d = require_binary(f)?;
    if point.len() != 2 {
        return Err(Error::Dimension(format!("point of P¹ needs 2 coordinates, got {}", point.len())));
    }
    if point.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate("zero point".into()));
    }
    if d < 2 {
        return Ok(false);
    }
    let dual = f.ring().dual();
    let l = Poly::from_terms(
        2,
        [
            (vec![1, 0], point[1].clone()),
            (vec![0, 1], -point[0].clone()),
        ],
    );
    let l2 = GradedForm::new(dual.clone(), Multidegree::new(&[2]), l.pow(2))?;
    let h_basis = MonomialBasis::new(dual, &Multidegree::new(&[d - 2]))?;
    let values: Vec<Rational> = h_basis
        .monomials()
        .iter()
        .map(|m| {
            let g = l2.poly().mul_monomial(m, &Rational::one());
            let g = GradedForm::new(l2.ring().clone(), Multidegree::new(&[d]), g)?;
            Ok(apolar_apply(&g, f)?.coefficient(&[0, 0]))
        })
        .collect::<Result<_>>()?;
    // nonzero h with Σ h_j values_j = 0 exists unless there is a single unknown with a nonzero value
    Ok(values.len() > 1 || values.iter().all(Zero::is_zero))
}
