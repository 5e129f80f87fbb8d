//! Antipolar forms via the rank-one determinant update, Ranestad-Schreyer membership, and the
//! symbolic forbidden-locus scan of ternary quartics.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::apolarity::{catalecticant, MonomialBasis};
use crate::error::{Error, Result};
use crate::exactalg::{
    factorial, rat, ExactMatrix, Exponents, GradedForm, Multidegree, Poly, Rational, Ring,
    TermRecord,
};

/// Hypothesis recorded by every certificate that relies on the antipolar characterisation.
pub const GENERICITY_ASSUMPTION: &str =
    "f is general of X-rank dim T_B; only invertibility of the catalecticant is verified";

/// `Ω(f)`: the form `ℓ ↦ det φ_{f+ν₂(𝔟(ℓ)),B} − det φ_{f,B}` in point coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntipolarForm {
    pub form: GradedForm,
    pub b: Multidegree,
    pub det_phi: Rational,
    pub source: GradedForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntipolarJson {
    #[serde(rename = "B")]
    pub b: Multidegree,
    pub det_phi: String,
    pub form: String,
    pub terms: Vec<TermRecord>,
}

impl AntipolarForm {
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        antipolar_eval(self, point)
    }

    pub fn to_json(&self) -> AntipolarJson {
        AntipolarJson {
            b: self.b.clone(),
            det_phi: self.det_phi.to_string(),
            form: self.form.to_string(),
            terms: self.form.term_records(),
        }
    }
}

fn check_ambient(ring: &Ring, b: &Multidegree) -> Result<()> {
    let sizes = ring.block_sizes();
    let ok = match (sizes.as_slice(), b.parts()) {
        ([_], [_]) => true,
        ([_, 2], [1, _]) => true,
        _ => false,
    };
    if !ok {
        return Err(Error::Unsupported(format!(
            "antipolar on blocks {sizes:?} with B = {b}; supported: one projective factor, or Pⁿ×P¹ with B = (1,d)"
        )));
    }
    Ok(())
}

fn check_degree(f: &GradedForm, b: &Multidegree) -> Result<()> {
    if f.degree() != &b.scale(2) {
        return Err(Error::Shape(format!(
            "form has multidegree {}, expected 2B = {}",
            f.degree(),
            b.scale(2)
        )));
    }
    Ok(())
}

fn check_point(ring: &Ring, point: &[Rational]) -> Result<()> {
    if point.len() != ring.num_graded() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, the ambient needs {}",
            point.len(),
            ring.num_graded()
        )));
    }
    for b in 0..ring.num_blocks() {
        if point[ring.block_range(b)].iter().all(Zero::is_zero) {
            return Err(Error::Degenerate(format!("point vanishes on block {}", b + 1)));
        }
    }
    Ok(())
}

/// `Π_b (2B_b)!`: the factor by which the catalecticant of `ν₂(𝔟(ℓ))` exceeds `v vᵀ`,
/// `v_α = ℓ^α`.
fn square_weight(b: &Multidegree) -> Rational {
    b.parts()
        .iter()
        .fold(Rational::one(), |acc, &k| acc * Rational::from_integer(factorial(2 * k)))
}

/// `ν₂(𝔟(ℓ)) = Π_b (ℓ_b · x_b)^(2B_b)` as a form of multidegree `2B`.
pub fn point_square(ring: &Arc<Ring>, b: &Multidegree, point: &[Rational]) -> Result<GradedForm> {
    if point.len() != ring.num_graded() || b.len() != ring.num_blocks() {
        return Err(Error::Dimension("point or multidegree does not match the ring".into()));
    }
    let n = ring.nvars();
    let mut acc = Poly::constant(n, Rational::one());
    for (blk, &k) in b.parts().iter().enumerate() {
        let linear = Poly::from_terms(
            n,
            ring.block_range(blk).map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, point[i].clone())
            }),
        );
        acc = &acc * &linear.pow(2 * k);
    }
    GradedForm::new(ring.clone(), b.scale(2), acc)
}

/// `weight · Σ_{α,β} adj[α][β] · ℓ^(α+β)` over `ring`.
fn adjugate_quadratic_form(
    ring: Arc<Ring>,
    basis: &MonomialBasis,
    adj: &ExactMatrix,
    weight: &Rational,
    extra: &[u32],
) -> Result<Poly> {
    let n = ring.nvars();
    let graded = basis.monomials()[0].len().min(n);
    let mut terms: Vec<(Exponents, Rational)> = Vec::new();
    for (i, a) in basis.monomials().iter().enumerate() {
        for (j, c) in basis.monomials().iter().enumerate() {
            let v = adj.get(i, j);
            if v.is_zero() {
                continue;
            }
            let mut e = vec![0; n];
            for k in 0..graded {
                e[k] = a[k] + c[k];
            }
            for (k, &x) in extra.iter().enumerate() {
                e[graded + k] += x;
            }
            terms.push((e, v * weight));
        }
    }
    Ok(Poly::from_terms(n, terms))
}

/// Antipolar of `f ∈ S_{2B}` computed as `weight · vᵀ adj(φ_{f,B}) v`, which equals the
/// determinant difference because the update `φ_{ν₂(𝔟(ℓ))}` has rank one.
pub fn antipolar(f: &GradedForm, b: &Multidegree) -> Result<AntipolarForm> {
    check_ambient(f.ring(), b)?;
    check_degree(f, b)?;
    let cat = catalecticant(f, b)?;
    let det_phi = cat.det()?;
    if det_phi.is_zero() {
        return Err(Error::SingularCatalecticant);
    }
    let adj = cat.matrix.adjugate_fast()?;
    let point_ring = f.ring().point_ring();
    let poly = adjugate_quadratic_form(
        point_ring.clone(),
        &cat.row_basis,
        &adj,
        &square_weight(b),
        &[],
    )?;
    let form = GradedForm::new(point_ring, b.scale(2), poly)?;
    Ok(AntipolarForm {
        form,
        b: b.clone(),
        det_phi,
        source: f.clone(),
    })
}

pub fn antipolar_eval(omega: &AntipolarForm, point: &[Rational]) -> Result<Rational> {
    let ring = omega.form.ring();
    if point.len() != ring.num_graded() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, the ambient needs {}",
            point.len(),
            ring.num_graded()
        )));
    }
    Ok(omega.form.eval(point))
}

/// The defining expression `det φ_{f+ν₂(𝔟(ℓ)),B} − det φ_{f,B}`, evaluated directly.
pub fn omega_by_determinant_difference(
    f: &GradedForm,
    b: &Multidegree,
    point: &[Rational],
) -> Result<Rational> {
    check_degree(f, b)?;
    let sq = point_square(f.ring(), b, point)?;
    let before = catalecticant(f, b)?.det()?;
    let after = catalecticant(&f.add(&sq)?, b)?.det()?;
    Ok(after - before)
}

/// `ℓ` supports a non-reduced point of a minimal apolar scheme iff `Ω(f)(ℓ) = 0`.
/// Valid under [`GENERICITY_ASSUMPTION`].
pub fn rs_membership(f: &GradedForm, b: &Multidegree, point: &[Rational]) -> Result<bool> {
    check_point(f.ring(), point)?;
    Ok(antipolar(f, b)?.eval(point)?.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ForbiddenVerdict {
    /// `Ω(f)(ℓ) = 0`, so `ℓ` lies in the forbidden locus.
    ForbiddenCandidate,
    /// `Ω(f)(ℓ) ≠ 0`; the antipolar criterion is one-directional and decides nothing here.
    NotDecided,
}

pub fn forbidden_certificate(
    f: &GradedForm,
    b: &Multidegree,
    point: &[Rational],
) -> Result<ForbiddenVerdict> {
    Ok(if rs_membership(f, b, point)? {
        ForbiddenVerdict::ForbiddenCandidate
    } else {
        ForbiddenVerdict::NotDecided
    })
}

/// Symbolic scan of `C_{f+λℓ⁴}` for a ternary quartic `f` and `ℓ = ax + by + cz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticScanReport {
    pub rank_cf: usize,
    pub size: usize,
    pub det_cf: Rational,
    /// `det C_{f+λℓ⁴} − det C_f`, over `[a,b,c]` with the parameter `lambda`.
    pub delta_poly: GradedForm,
    /// `Σ_α n_α·ℓ^α` for each left-null vector `n` of `C_f`, over `[a,b,c]`.
    pub nullspace_conditions: Vec<GradedForm>,
    /// The kernel of `C_f` as quadratic operators.
    pub kernel: Vec<GradedForm>,
    pub annotations: Vec<String>,
}

pub fn quartic_scan_ring() -> Arc<Ring> {
    Ring::with_params(&[&["a", "b", "c"]], &["lambda"]).unwrap()
}

pub fn forbidden_scan_quartic(f: &GradedForm) -> Result<QuarticScanReport> {
    if f.ring().block_sizes() != [3] || f.degree() != &Multidegree::new(&[4]) {
        return Err(Error::Shape(format!(
            "expected a ternary quartic, got multidegree {} over {}",
            f.degree(),
            f.ring()
        )));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("zero quartic".into()));
    }
    let two = Multidegree::new(&[2]);
    let cat = catalecticant(f, &two)?;
    let size = cat.matrix.rows();
    let rank_cf = cat.rank();
    let det_cf = cat.det()?;
    let adj = cat.matrix.adjugate_fast()?;
    let scan = quartic_scan_ring();
    let delta = adjugate_quadratic_form(scan.clone(), &cat.row_basis, &adj, &rat(24), &[1])?;
    let delta_poly = if delta.is_zero() {
        GradedForm::zero(scan, Multidegree::new(&[4]))
    } else {
        GradedForm::new(scan, Multidegree::new(&[4]), delta)?
    };
    let points = Ring::ternary().point_ring();
    let kernel_vectors = cat.kernel();
    let nullspace_conditions = kernel_vectors
        .iter()
        .map(|v| cat.row_basis.combination(points.clone(), v))
        .collect::<Result<Vec<_>>>()?;
    let kernel = cat.kernel_forms()?;
    let annotations = quartic_annotations(rank_cf, size, &cat.row_basis, &kernel_vectors);
    Ok(QuarticScanReport {
        rank_cf,
        size,
        det_cf,
        delta_poly,
        nullspace_conditions,
        kernel,
        annotations,
    })
}

/// Symmetric matrix of the quadric `Σ n_α ∂^α` in three variables.
fn quadric_matrix(basis: &MonomialBasis, v: &[Rational]) -> ExactMatrix {
    let mut q = ExactMatrix::zeros(3, 3);
    for (m, c) in basis.monomials().iter().zip(v) {
        let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat_n(i, m[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            q.set(i, i, c * rat(2));
        } else {
            q.set(i, j, c.clone());
            q.set(j, i, c.clone());
        }
    }
    q
}

fn quartic_annotations(
    rank: usize,
    size: usize,
    basis: &MonomialBasis,
    kernel: &[Vec<Rational>],
) -> Vec<String> {
    let mut notes = vec![format!(
        "rank C_f = {rank}: lower bound for the complex Waring rank"
    )];
    match kernel.len() {
        0 => notes.push("C_f injective: complex rank 6".into()),
        1 => {
            let q = quadric_matrix(basis, &kernel[0]);
            if q.rank() == 1 {
                notes.push("kernel spanned by the square of a linear form: complex rank 7".into());
            } else {
                notes.push(format!(
                    "kernel spanned by a quadric of rank {}: no rank criterion encoded",
                    q.rank()
                ));
            }
        }
        2 => notes.push("two-dimensional kernel: complex rank 4 or 6".into()),
        k => notes.push(format!("kernel of dimension {k}: no rank criterion encoded")),
    }
    if rank + 2 <= size {
        notes.push("rank deficiency ≥ 2: det C_{f+λℓ⁴} vanishes identically".into());
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn worked_f() -> GradedForm {
        let t = [
            ([2, 0, 2, 0], 4),
            ([2, 0, 1, 1], 6),
            ([2, 0, 0, 2], 2),
            ([1, 1, 2, 0], 8),
            ([1, 1, 1, 1], 7),
            ([1, 1, 0, 2], 5),
            ([0, 2, 2, 0], 3),
            ([0, 2, 1, 1], 7),
            ([0, 2, 0, 2], 2),
        ];
        GradedForm::from_terms(
            Ring::p1xp1(),
            Multidegree::new(&[2, 2]),
            t.iter().map(|(e, c)| (e.to_vec(), rat(*c))).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn ternary(terms: &[([u32; 3], i64)], deg: u32) -> GradedForm {
        GradedForm::from_terms(
            Ring::ternary(),
            Multidegree::new(&[deg]),
            terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn worked_antipolar_coefficients() {
        let omega = antipolar(&worked_f(), &Multidegree::new(&[1, 1])).unwrap();
        // exponents (s1, s2, t1, t2)
        let expected = [
            ([2, 0, 2, 0], -1728),
            ([1, 1, 2, 0], -1104),
            ([0, 2, 2, 0], -1760),
            ([2, 0, 1, 1], 80),
            ([1, 1, 1, 1], 12272),
            ([0, 2, 1, 1], -2144),
            ([2, 0, 0, 2], -4400),
            ([1, 1, 0, 2], -2048),
            ([0, 2, 0, 2], -1344),
        ];
        assert_eq!(omega.form.num_terms(), 9);
        for (e, c) in expected {
            assert_eq!(omega.form.coefficient(&e), rat(c), "coefficient of {e:?}");
        }
        assert_eq!(omega.det_phi, rat(-4751));
        let one_zero = [rat(1), rat(0), rat(1), rat(0)];
        assert_eq!(omega.eval(&one_zero).unwrap(), rat(-1728));
        assert!(omega.eval(&[rat(1)]).is_err());
    }

    #[test]
    fn classical_quadric() {
        let f = ternary(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1)], 2);
        let omega = antipolar(&f, &Multidegree::new(&[1])).unwrap();
        assert_eq!(omega.form.to_string(), "8*a^2 + 8*b^2 + 8*c^2");
    }

    #[test]
    fn singular_and_unsupported() {
        let f = ternary(&[([2, 0, 0], 1)], 2);
        assert_eq!(
            antipolar(&f, &Multidegree::new(&[1])).unwrap_err(),
            Error::SingularCatalecticant
        );
        let ring = Ring::new(&[&["x", "y"], &["z", "w"], &["u", "v"]]).unwrap();
        let g = GradedForm::from_terms(
            ring,
            Multidegree::new(&[2, 2, 2]),
            vec![(vec![2, 0, 2, 0, 2, 0], rat(1))],
        )
        .unwrap();
        assert!(matches!(
            antipolar(&g, &Multidegree::new(&[1, 1, 1])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn matches_determinant_difference() {
        let f = worked_f();
        let b = Multidegree::new(&[1, 1]);
        let omega = antipolar(&f, &b).unwrap();
        for p in [[1, 2, 3, -1], [0, 1, 5, 2], [-3, 7, 1, 1]] {
            let p: Vec<Rational> = p.iter().map(|&x| rat(x)).collect();
            assert_eq!(
                omega.eval(&p).unwrap(),
                omega_by_determinant_difference(&f, &b, &p).unwrap()
            );
        }
    }

    #[test]
    fn quartic_scans() {
        // (x+y)^4 + (x^3+y^3) z
        let f = ternary(
            &[
                ([4, 0, 0], 1),
                ([3, 1, 0], 4),
                ([2, 2, 0], 6),
                ([1, 3, 0], 4),
                ([0, 4, 0], 1),
                ([3, 0, 1], 1),
                ([0, 3, 1], 1),
            ],
            4,
        );
        let r = forbidden_scan_quartic(&f).unwrap();
        assert_eq!(r.rank_cf, 5);
        assert_eq!(r.delta_poly.num_terms(), 1);
        assert_eq!(r.delta_poly.coefficient(&[0, 0, 4, 1]).abs(), rat(746496));
        assert_eq!(r.nullspace_conditions.len(), 1);
        assert_eq!(r.nullspace_conditions[0].to_string(), "c^2");

        let g = ternary(&[([1, 3, 0], 1), ([0, 2, 2], 1)], 4);
        let r = forbidden_scan_quartic(&g).unwrap();
        assert_eq!(r.rank_cf, 3);
        assert!(r.delta_poly.is_zero());
        let at = |p: [i64; 3]| {
            let p: Vec<Rational> = p.iter().map(|&x| rat(x)).collect();
            r.nullspace_conditions.iter().all(|q| q.eval(&p).is_zero())
        };
        assert!(at([0, 1, 0]));
        assert!(!at([1, 1, 1]));
    }
}
