use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::poly::{Exponents, Poly};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Variables of a product of projective spaces, grouped into blocks, plus optional
/// ungraded parameters that behave as symbolic coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    blocks: Vec<Vec<String>>,
    params: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(blocks: &[&[S]]) -> Result<Arc<Ring>> {
        Self::with_params(blocks, &[] as &[&str])
    }

    pub fn with_params<S: AsRef<str>, P: AsRef<str>>(
        blocks: &[&[S]],
        params: &[P],
    ) -> Result<Arc<Ring>> {
        let blocks: Vec<Vec<String>> = blocks
            .iter()
            .map(|b| b.iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        let params: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::Shape("empty variable block".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in blocks.iter().flatten().chain(params.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(Error::Shape(format!("duplicate variable name {name:?}")));
            }
        }
        Ok(Arc::new(Ring { blocks, params }))
    }

    /// `x, y | z, w`: the Cox ring of P¹×P¹.
    pub fn p1xp1() -> Arc<Ring> {
        Self::new(&[&["x", "y"], &["z", "w"]]).unwrap()
    }

    /// `x0..xn | z, w`: the Cox ring of Pⁿ×P¹.
    pub fn pn_x_p1(n: usize) -> Arc<Ring> {
        let xs: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
        Self::new(&[&xs[..], &["z".to_string(), "w".to_string()][..]]).unwrap()
    }

    /// Single block of variables, e.g. `["x", "y", "z"]` for ternary forms.
    pub fn projective(names: &[&str]) -> Arc<Ring> {
        Self::new(&[names]).unwrap()
    }

    pub fn binary() -> Arc<Ring> {
        Self::projective(&["x", "y"])
    }

    pub fn ternary() -> Arc<Ring> {
        Self::projective(&["x", "y", "z"])
    }

    /// Same block structure, names prefixed with `d` (differential operators).
    pub fn dual(&self) -> Arc<Ring> {
        let blocks: Vec<Vec<String>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|n| format!("d{n}")).collect())
            .collect();
        let refs: Vec<&[String]> = blocks.iter().map(|b| &b[..]).collect();
        Ring::with_params(&refs, &self.params).unwrap()
    }

    /// Same block sizes with point-coordinate names: `a, b, c, ..` for a single block,
    /// `s1, s2, .. | t1, t2 | u1 ..` otherwise.
    pub fn point_ring(&self) -> Arc<Ring> {
        const LETTERS: [&str; 6] = ["s", "t", "u", "v", "p", "q"];
        let blocks: Vec<Vec<String>> = if self.blocks.len() == 1 && self.blocks[0].len() <= 8 {
            vec![("abcdefgh".chars())
                .take(self.blocks[0].len())
                .map(String::from)
                .collect()]
        } else {
            self.blocks
                .iter()
                .enumerate()
                .map(|(b, vars)| {
                    let letter = LETTERS.get(b).copied().unwrap_or("r");
                    (1..=vars.len()).map(|i| format!("{letter}{i}")).collect()
                })
                .collect()
        };
        let refs: Vec<&[String]> = blocks.iter().map(|b| &b[..]).collect();
        Ring::new(&refs).unwrap()
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_graded(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn nvars(&self) -> usize {
        self.num_graded() + self.params.len()
    }

    pub fn block_range(&self, block: usize) -> Range<usize> {
        let start: usize = self.blocks[..block].iter().map(Vec::len).sum();
        start..start + self.blocks[block].len()
    }

    pub fn var_names(&self) -> impl Iterator<Item = &str> {
        self.blocks
            .iter()
            .flatten()
            .chain(self.params.iter())
            .map(String::as_str)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names().position(|n| n == name)
    }

    pub fn same_shape(&self, other: &Ring) -> bool {
        self.block_sizes() == other.block_sizes() && self.params.len() == other.params.len()
    }

    pub fn multidegree_of(&self, exps: &[u32]) -> Multidegree {
        Multidegree(
            (0..self.num_blocks())
                .map(|b| self.block_range(b).map(|i| exps[i]).sum())
                .collect(),
        )
    }

    pub fn var(&self, name: &str) -> Option<Poly> {
        self.var_index(name).map(|i| Poly::var(self.nvars(), i))
    }

    /// Renders one monomial, e.g. `x^2*z*w`; the empty monomial renders as `1`.
    pub fn format_monomial(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = self
            .var_names()
            .zip(exps)
            .filter(|(_, &k)| k > 0)
            .map(|(n, &k)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Canonical term order: graded lexicographic inside each block (larger first), blocks in
    /// declaration order, parameters last.
    pub fn canonical_cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let graded = self.num_graded();
        for block in 0..self.num_blocks() {
            let r = self.block_range(block);
            let da: u32 = a[r.clone()].iter().sum();
            let db: u32 = b[r.clone()].iter().sum();
            let ord = db.cmp(&da).then_with(|| b[r.clone()].cmp(&a[r.clone()]));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        b[graded..].cmp(&a[graded..])
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|b| b.join(",")).collect();
        write!(f, "[{}]", blocks.join(" | "))?;
        if !self.params.is_empty() {
            write!(f, " params [{}]", self.params.join(","))?;
        }
        Ok(())
    }
}

/// One degree per variable block, e.g. `A = (2, 2d)` or `B = (1, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn new(parts: &[u32]) -> Self {
        Multidegree(parts.to_vec())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ≥ other` componentwise, i.e. `self - other` has global sections.
    pub fn dominates(&self, other: &Multidegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        self.dominates(other)
            .then(|| Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Multidegree {
        Multidegree(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Multihomogeneous form over a [`Ring`]. Every stored term has the declared multidegree in
/// the graded blocks; parameter exponents are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedForm {
    ring: Arc<Ring>,
    degree: Multidegree,
    poly: Poly,
}

impl GradedForm {
    pub fn new(ring: Arc<Ring>, degree: Multidegree, poly: Poly) -> Result<Self> {
        if poly.nvars() != ring.nvars() {
            return Err(Error::Dimension(format!(
                "polynomial has {} variables, ring {} has {}",
                poly.nvars(),
                ring,
                ring.nvars()
            )));
        }
        if degree.len() != ring.num_blocks() {
            return Err(Error::Dimension(format!(
                "multidegree {degree} does not match {} blocks",
                ring.num_blocks()
            )));
        }
        let mut reference: Option<&Exponents> = None;
        for (e, _) in poly.terms() {
            if ring.multidegree_of(e) != degree {
                let first = reference
                    .map(|r| ring.format_monomial(r))
                    .unwrap_or_else(|| format!("degree {degree}"));
                return Err(Error::Inhomogeneous {
                    first,
                    second: ring.format_monomial(e),
                });
            }
            reference.get_or_insert(e);
        }
        Ok(GradedForm { ring, degree, poly })
    }

    /// Infers the multidegree from the terms. Fails on the zero polynomial.
    pub fn from_poly(ring: Arc<Ring>, poly: Poly) -> Result<Self> {
        let first = poly
            .terms()
            .next()
            .map(|(e, _)| e.clone())
            .ok_or_else(|| Error::Degenerate("zero polynomial has no multidegree".into()))?;
        if first.len() != ring.nvars() {
            return Err(Error::Dimension("polynomial/ring variable count".into()));
        }
        let degree = ring.multidegree_of(&first);
        // report the first offending pair in canonical order
        let mut terms: Vec<&Exponents> = poly.terms().map(|(e, _)| e).collect();
        terms.sort_by(|a, b| ring.canonical_cmp(a, b));
        let lead = terms[0];
        let lead_degree = ring.multidegree_of(lead);
        if let Some(bad) = terms.iter().find(|e| ring.multidegree_of(e) != lead_degree) {
            return Err(Error::Inhomogeneous {
                first: ring.format_monomial(lead),
                second: ring.format_monomial(bad),
            });
        }
        debug_assert_eq!(degree, lead_degree);
        Ok(GradedForm {
            ring,
            degree: lead_degree,
            poly,
        })
    }

    pub fn zero(ring: Arc<Ring>, degree: Multidegree) -> Self {
        let poly = Poly::zero(ring.nvars());
        GradedForm { ring, degree, poly }
    }

    pub fn from_terms<I>(ring: Arc<Ring>, degree: Multidegree, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let poly = Poly::from_terms(ring.nvars(), terms);
        Self::new(ring, degree, poly)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.poly.coefficient(exps)
    }

    /// True when no parameter occurs, i.e. all coefficients are rational numbers.
    pub fn is_numeric(&self) -> bool {
        let graded = self.ring.num_graded();
        self.poly.terms().all(|(e, _)| e[graded..].iter().all(|&k| k == 0))
    }

    fn check_same(&self, other: &GradedForm) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_same(other)?;
        self.check_degree(other)?;
        Ok(GradedForm {
            ring: self.ring.clone(),
            degree: self.degree.clone(),
            poly: &self.poly + &other.poly,
        })
    }

    pub fn sub(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_same(other)?;
        self.check_degree(other)?;
        Ok(GradedForm {
            ring: self.ring.clone(),
            degree: self.degree.clone(),
            poly: &self.poly - &other.poly,
        })
    }

    fn check_degree(&self, other: &GradedForm) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous {
                first: format!("degree {}", self.degree),
                second: format!("degree {}", other.degree),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_same(other)?;
        Ok(GradedForm {
            ring: self.ring.clone(),
            degree: self.degree.add(&other.degree),
            poly: &self.poly * &other.poly,
        })
    }

    pub fn scale(&self, c: &Rational) -> GradedForm {
        GradedForm {
            ring: self.ring.clone(),
            degree: self.degree.clone(),
            poly: self.poly.scale(c),
        }
    }

    pub fn pow(&self, k: u32) -> GradedForm {
        GradedForm {
            ring: self.ring.clone(),
            degree: self.degree.scale(k),
            poly: self.poly.pow(k),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.poly.eval(point)
    }

    /// Terms in the canonical order used for printing and serialisation.
    pub fn canonical_terms(&self) -> Vec<(Exponents, Rational)> {
        let mut terms: Vec<(Exponents, Rational)> = self
            .poly
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        terms.sort_by(|a, b| self.ring.canonical_cmp(&a.0, &b.0));
        terms
    }

    pub fn term_records(&self) -> Vec<TermRecord> {
        self.canonical_terms()
            .into_iter()
            .map(|(exponents, c)| TermRecord {
                exponents,
                coefficient: c.to_string(),
            })
            .collect()
    }

    /// Rebinds to a ring of the same shape (e.g. renaming point variables).
    pub fn with_ring(&self, ring: Arc<Ring>) -> Result<GradedForm> {
        if !self.ring.same_shape(&ring) {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, ring)));
        }
        Ok(GradedForm {
            ring,
            degree: self.degree.clone(),
            poly: self.poly.clone(),
        })
    }
}

/// One term of a form for serialisation; the coefficient is a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let mono = self.ring.format_monomial(e);
            match (abs.is_one(), mono.as_str()) {
                (_, "1") => write!(f, "{abs}")?,
                (true, m) => write!(f, "{m}")?,
                (false, m) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}
