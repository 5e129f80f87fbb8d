//! Exact inertia, real-rank certificates for bidegree `(2,2d)` forms on `P¹×P¹`, the
//! boundary-side test on the antipolar, and a seeded typical-rank sampler.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::antipolar::{antipolar, point_square, AntipolarForm, GENERICITY_ASSUMPTION};
use crate::apolarity::{catalecticant, MonomialBasis};
use crate::error::{Error, Result};
use crate::exactalg::{
    binary_form_positive, rat, BinaryForm, ExactMatrix, GradedForm, Multidegree, Rational,
    RealSignAnalysis, Ring, UniPoly,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignatureReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureReport {
    pub fn size(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }
}

impl fmt::Display for SignatureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

fn coefficient_sign_changes(coeffs: &[Rational]) -> usize {
    let signs: Vec<bool> = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia of a symmetric rational matrix from its characteristic polynomial: the zero
/// multiplicity is the number of vanishing low-order coefficients, and since every root is
/// real Descartes' rule of signs is exact for the positive and negative roots.
pub fn signature(m: &ExactMatrix) -> Result<SignatureReport> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    signature_with_char_poly(m).map(|(s, _)| s)
}

pub(crate) fn signature_with_char_poly(m: &ExactMatrix) -> Result<(SignatureReport, UniPoly)> {
    let p = m.char_poly()?;
    let n_zero = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let q = UniPoly::new(p.coeffs()[n_zero..].to_vec());
    let n_plus = coefficient_sign_changes(q.coeffs());
    let n_minus = coefficient_sign_changes(q.reflect().coeffs());
    Ok((
        SignatureReport {
            n_plus,
            n_minus,
            n_zero,
        },
        p,
    ))
}

/// Real X-rank of `f` when `φ_{f,B}` is positive semidefinite: the rank of `φ_{f,B}`.
pub fn reznick_rank(f: &GradedForm, b: &Multidegree) -> Result<usize> {
    let cat = catalecticant(f, b)?;
    let sig = signature(&cat.matrix)?;
    if sig.n_minus > 0 {
        return Err(Error::NotPsd {
            n_plus: sig.n_plus,
            n_minus: sig.n_minus,
            n_zero: sig.n_zero,
        });
    }
    Ok(sig.n_plus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundarySide {
    OmegaDefinite,
    OmegaHasRealZero,
    OnBoundary,
}

impl fmt::Display for BoundarySide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundarySide::OmegaDefinite => "OMEGA_DEFINITE",
            BoundarySide::OmegaHasRealZero => "OMEGA_HAS_REAL_ZERO",
            BoundarySide::OnBoundary => "ON_BOUNDARY",
        })
    }
}

/// Evidence for a boundary-side decision: `Ω = A s₁² + B s₁s₂ + C s₂²` and
/// `D = 4AC − B²`, all binary forms in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub side: BoundarySide,
    /// Coefficients of `D`, `t₁^(4d)` first.
    pub discriminant_form: Vec<String>,
    pub analysis: Option<RealSignAnalysis>,
}

fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Coefficient forms `(A, B, C)` of an `(2, 2d)` form in `s₁², s₁s₂, s₂²`.
fn split_biform(omega: &GradedForm) -> Result<[BinaryForm<Rational>; 3]> {
    let ring = omega.ring();
    let deg = omega.degree().parts();
    if ring.block_sizes() != [2, 2] || !ring.params().is_empty() || deg.len() != 2 || deg[0] != 2 || !deg[1].is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "expected a form of bidegree (2,2d) on P¹×P¹, got {} over {}",
            omega.degree(),
            ring
        )));
    }
    let m = deg[1];
    let part = |s1: u32| {
        BinaryForm::new(
            (0..=m)
                .map(|i| omega.coefficient(&[s1, 2 - s1, m - i, i]))
                .collect(),
        )
    };
    Ok([part(2)?, part(1)?, part(0)?])
}

/// Decides whether a `(2,2d)` form has a real projective zero on `P¹(ℝ)×P¹(ℝ)`, through the
/// sign of the binary form `D(t) = 4A(t)C(t) − B(t)²`.
pub fn omega_real_zero_exists(omega: &GradedForm) -> Result<BoundaryReport> {
    let [a, b, c] = split_biform(omega)?;
    let d = a.mul(&c).scaled(&rat(4)).sub(&b.mul(&b));
    let discriminant_form = rational_strings(d.coeffs());
    if d.is_zero() {
        return Ok(BoundaryReport {
            side: BoundarySide::OnBoundary,
            discriminant_form,
            analysis: None,
        });
    }
    let analysis = d.real_sign_analysis()?;
    let side = if analysis.has_negative() {
        BoundarySide::OmegaHasRealZero
    } else if binary_form_positive(&d)? {
        BoundarySide::OmegaDefinite
    } else {
        BoundarySide::OnBoundary
    };
    Ok(BoundaryReport {
        side,
        discriminant_form,
        analysis: Some(analysis),
    })
}

trait BinaryFormOps {
    fn scaled(&self, c: &Rational) -> Self;
    fn sub(&self, other: &Self) -> Self;
}

impl BinaryFormOps for BinaryForm<Rational> {
    fn scaled(&self, c: &Rational) -> Self {
        BinaryForm::new(self.coeffs().iter().map(|x| x * c).collect()).unwrap()
    }

    fn sub(&self, other: &Self) -> Self {
        BinaryForm::new(
            self.coeffs()
                .iter()
                .zip(other.coeffs())
                .map(|(x, y)| x - y)
                .collect(),
        )
        .unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    RealRankEq(usize),
    RealRankGe(usize),
    PsdRank(usize),
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::RealRankEq(r) => write!(f, "REAL_RANK_EQ({r})"),
            Verdict::RealRankGe(r) => write!(f, "REAL_RANK_GE({r})"),
            Verdict::PsdRank(r) => write!(f, "PSD_RANK({r})"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exactly checkable evidence for `REAL_RANK_EQ(2d+2)`: a rational point `ℓ′` and `κ > 0` such
/// that `φ_{f+κ·ν₂(𝔟(ℓ′)),B}` is positive semidefinite of rank `2d+1`. Then
/// `f + κ·ν₂(𝔟(ℓ′))` has real rank `2d+1` and `f` has real rank at most `2d+2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `(s₁, s₂, t₁, t₂)`.
    pub point: Vec<String>,
    pub omega_value: String,
    pub kappa: String,
    pub updated_signature: SignatureReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub verdict: Verdict,
    pub d: u32,
    pub signature: SignatureReport,
    pub det_phi: String,
    pub char_poly: Vec<String>,
    pub boundary: Option<BoundaryReport>,
    pub witness: Option<Witness>,
    pub assumptions: Vec<String>,
}

/// A rational `s` with `Q(s) = A s₁² + B s₁s₂ + C s₂² > 0`, given `4AC − B² < 0`.
fn positive_direction(a: &Rational, b: &Rational, c: &Rational) -> [Rational; 2] {
    let (zero, one) = (Rational::zero(), Rational::one());
    if a.is_positive() {
        [one, zero]
    } else if c.is_positive() {
        [zero, one]
    } else if c.is_negative() {
        // maximum of Q(1, y) is D/(4C) > 0
        [one, -b / (c * rat(2))]
    } else {
        // C = 0 and B ≠ 0: Q(1, y) = A + B y
        [one, (Rational::one() - a) / b]
    }
}

fn build_witness(
    f: &GradedForm,
    b: &Multidegree,
    omega: &AntipolarForm,
    t0: &(Rational, Rational),
) -> Result<Witness> {
    let [fa, fb, fc] = split_biform(&omega.form)?;
    let (x, y) = t0;
    let s = positive_direction(&fa.eval(x, y), &fb.eval(x, y), &fc.eval(x, y));
    let point = vec![s[0].clone(), s[1].clone(), x.clone(), y.clone()];
    let value = omega.eval(&point)?;
    debug_assert!(value.is_positive());
    let kappa = -&omega.det_phi / &value;
    let update = point_square(f.ring(), b, &point)?.scale(&kappa);
    let updated = catalecticant(&f.add(&update)?, b)?;
    Ok(Witness {
        point: rational_strings(&point),
        omega_value: value.to_string(),
        kappa: kappa.to_string(),
        updated_signature: signature(&updated.matrix)?,
    })
}

fn require_p1xp1_form(f: &GradedForm) -> Result<u32> {
    let deg = f.degree().parts();
    if f.ring().block_sizes() != [2, 2] || deg.len() != 2 || deg[0] != 2 || !deg[1].is_multiple_of(2) || deg[1] == 0 {
        return Err(Error::Shape(format!(
            "expected a form of bidegree (2,2d) with d ≥ 1 on P¹×P¹, got {}",
            f.degree()
        )));
    }
    Ok(deg[1] / 2)
}

/// Real-rank certificate for a real form of bidegree `(2,2d)` on `P¹×P¹`.
pub fn rank_certify(f: &GradedForm) -> Result<RankCertificate> {
    let d = require_p1xp1_form(f)?;
    let b = Multidegree::new(&[1, d]);
    let cat = catalecticant(f, &b)?;
    let det_phi = cat.det()?;
    if det_phi.is_zero() {
        return Err(Error::SingularCatalecticant);
    }
    let (sig, char_poly) = signature_with_char_poly(&cat.matrix)?;
    let n = (2 * d + 2) as usize;
    let mut cert = RankCertificate {
        verdict: Verdict::Inconclusive,
        d,
        signature: sig.clone(),
        det_phi: det_phi.to_string(),
        char_poly: rational_strings(char_poly.coeffs()),
        boundary: None,
        witness: None,
        assumptions: Vec::new(),
    };
    if sig.n_plus == n {
        cert.verdict = Verdict::PsdRank(n);
        return Ok(cert);
    }
    if sig.n_plus + 1 != n || sig.n_minus != 1 {
        cert.assumptions
            .push("the real-rank criterion covers signatures (2d+2,0) and (2d+1,1) only".into());
        return Ok(cert);
    }
    cert.assumptions.push(GENERICITY_ASSUMPTION.into());
    cert.assumptions
        .push("f is a general real form outside the dual variety of the (2,2d) embedding".into());
    let omega = antipolar(f, &b)?;
    let boundary = omega_real_zero_exists(&omega.form)?;
    match boundary.side {
        BoundarySide::OmegaHasRealZero => {
            let t0 = boundary
                .analysis
                .as_ref()
                .and_then(|a| a.negative_witness.clone())
                .expect("negative value recorded");
            cert.witness = Some(build_witness(f, &b, &omega, &t0)?);
            cert.verdict = Verdict::RealRankEq(n);
        }
        BoundarySide::OmegaDefinite => cert.verdict = Verdict::RealRankGe(n + 1),
        BoundarySide::OnBoundary => cert
            .assumptions
            .push("Ω has a degenerate real zero set; no rank claim is made".into()),
    }
    cert.boundary = Some(boundary);
    Ok(cert)
}

/// Coefficient range of the sampler: integers uniform in `[-COEFF_BOUND, COEFF_BOUND]`.
pub const COEFF_BOUND: i64 = 9;

/// The `index`-th sampled form for `(d, seed)`: a ChaCha8 stream keyed by the seed, with the
/// sample index as stream number, drawing one coefficient per monomial of `S_{(2,2d)}` in
/// basis order.
pub fn sample_form(d: u32, seed: u64, index: u64) -> GradedForm {
    let ring = Ring::p1xp1();
    let deg = Multidegree::new(&[2, 2 * d]);
    let basis = MonomialBasis::new(ring.clone(), &deg).expect("valid multidegree");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let coeffs: Vec<Rational> = (0..basis.len())
        .map(|_| rat(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND)))
        .collect();
    basis.combination(ring, &coeffs).expect("basis combination")
}

#[derive(Clone, Debug)]
enum Outcome {
    Singular,
    Certified(SignatureReport, Verdict, Option<BoundarySide>),
}

fn classify(f: &GradedForm) -> Result<Outcome> {
    match rank_certify(f) {
        Ok(c) => Ok(Outcome::Certified(
            c.signature,
            c.verdict,
            c.boundary.map(|b| b.side),
        )),
        Err(Error::SingularCatalecticant) => Ok(Outcome::Singular),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub d: u32,
    pub n_samples: usize,
    pub seed: u64,
    pub coefficient_range: [i64; 2],
    pub generator: String,
    pub singular: usize,
    pub signatures: BTreeMap<String, usize>,
    pub verdicts: BTreeMap<String, usize>,
    /// Boundary sides among the signature-`(2d+1,1)` samples.
    pub boundary_sides: BTreeMap<String, usize>,
    pub one_negative: usize,
    /// Fraction of signature-`(2d+1,1)` samples on each side, as `"p/q"` strings.
    pub side_fractions: BTreeMap<String, String>,
}

impl SampleStats {
    pub fn verdict_count(&self, v: Verdict) -> usize {
        self.verdicts.get(&v.to_string()).copied().unwrap_or(0)
    }
}

/// Samples `n_samples` forms and tallies signatures, verdicts and boundary sides. Samples are
/// classified in parallel and merged in index order, so the output does not depend on the
/// number of worker threads.
pub fn typical_rank_sample(d: u32, n_samples: usize, seed: u64) -> Result<SampleStats> {
    if n_samples == 0 {
        return Err(Error::EmptySample);
    }
    if d == 0 {
        return Err(Error::DegreeTooSmall { got: 0, need: 1 });
    }
    let outcomes: Vec<Outcome> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| classify(&sample_form(d, seed, i)))
        .collect::<Result<_>>()?;
    let mut stats = SampleStats {
        d,
        n_samples,
        seed,
        coefficient_range: [-COEFF_BOUND, COEFF_BOUND],
        generator: "ChaCha8, seed_from_u64(seed), stream = sample index".into(),
        singular: 0,
        signatures: BTreeMap::new(),
        verdicts: BTreeMap::new(),
        boundary_sides: BTreeMap::new(),
        one_negative: 0,
        side_fractions: BTreeMap::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Singular => stats.singular += 1,
            Outcome::Certified(sig, verdict, side) => {
                *stats.signatures.entry(sig.to_string()).or_default() += 1;
                *stats.verdicts.entry(verdict.to_string()).or_default() += 1;
                if let Some(side) = side {
                    stats.one_negative += 1;
                    *stats.boundary_sides.entry(side.to_string()).or_default() += 1;
                }
            }
        }
    }
    if stats.one_negative > 0 {
        for (side, count) in &stats.boundary_sides {
            let frac = Rational::new((*count).into(), stats.one_negative.into());
            stats.side_fractions.insert(side.clone(), frac.to_string());
        }
    }
    Ok(stats)
}

/// [`typical_rank_sample`] on a dedicated pool of `threads` workers.
pub fn typical_rank_sample_with_threads(
    d: u32,
    n_samples: usize,
    seed: u64,
    threads: usize,
) -> Result<SampleStats> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    pool.install(|| typical_rank_sample(d, n_samples, seed))
}
