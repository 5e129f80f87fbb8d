use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::Poly;
use super::rational::{format_rational, int, primitive_integer_vector, Rational};
use super::ring::{GradedForm, Multidegree};
use super::scalar::CommRing;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Matrix with rational entries.
pub type ExactMatrix = Matrix<Rational>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Deletes row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T: CommRing> Matrix<T> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.zero_entry();
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                acc.add(&self.get(i, k).mul(other.get(k, j)))
            })
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in matrix sum".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in matrix difference".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        Ok((0..self.rows).fold(self.zero_entry(), |acc, i| acc.add(self.get(i, i))))
    }

    fn zero_entry(&self) -> T {
        self.data
            .first()
            .map(CommRing::zero_like)
            .expect("matrix has at least one entry")
    }

    fn one_entry(&self) -> T {
        self.data
            .first()
            .map(CommRing::one_like)
            .expect("matrix has at least one entry")
    }

    /// Fraction-free (Bareiss) elimination with row-swap pivoting. Every division is exact.
    pub fn det_bareiss(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(Error::Dimension("determinant of a 0x0 matrix".into()));
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = self.one_entry();
        for k in 0..n - 1 {
            if m.get(k, k).vanishes() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).vanishes()) else {
                    return Ok(self.zero_entry());
                };
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                let lead = m.get(i, k).clone();
                for j in k + 1..n {
                    let num = m.get(i, j).mul(&pivot).sub(&lead.mul(m.get(k, j)));
                    let q = num
                        .div_exact(&prev)
                        .expect("Bareiss division is exact");
                    m.set(i, j, q);
                }
                m.set(i, k, self.zero_entry());
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// Laplace expansion along rows, memoised over the set of remaining columns.
    pub fn det_cofactor(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(Error::Dimension("determinant of a 0x0 matrix".into()));
        }
        if n > 24 {
            return Err(Error::Unsupported("cofactor expansion beyond 24x24".into()));
        }
        let mut memo: HashMap<u32, T> = HashMap::new();
        Ok(self.cofactor_rec(0, (1u32 << n) - 1, &mut memo))
    }

    fn cofactor_rec(&self, row: usize, cols: u32, memo: &mut HashMap<u32, T>) -> T {
        if row == self.rows {
            return self.one_entry();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = self.zero_entry();
        let mut sign_positive = true;
        for j in 0..self.cols {
            if cols & (1 << j) == 0 {
                continue;
            }
            let a = self.get(row, j);
            if !a.vanishes() {
                let sub = self.cofactor_rec(row + 1, cols & !(1 << j), memo);
                let term = a.mul(&sub);
                acc = if sign_positive { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Classical adjugate: `adj[j][i] = (-1)^(i+j) det(minor(i, j))`.
    pub fn adjugate(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(Error::Dimension("adjugate of a 0x0 matrix".into()));
        }
        if n == 1 {
            return Ok(Matrix {
                rows: 1,
                cols: 1,
                data: vec![self.one_entry()],
            });
        }
        let mut out = Self::from_fn(n, n, |_, _| self.zero_entry());
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).det_bareiss()?;
                out.set(j, i, if (i + j) % 2 == 0 { d } else { d.neg() });
            }
        }
        Ok(out)
    }
}

impl ExactMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { Rational::zero() })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, each vector scaled to integers with content one.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                primitive_integer_vector(&v).iter().map(int).collect()
            })
            .collect()
    }

    /// Basis of the left null space `{v : vᵀM = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.transpose().kernel()
    }

    pub fn det(&self) -> Result<Rational> {
        self.det_bareiss()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("matrix is singular".into()));
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Adjugate via `det·M⁻¹` when invertible, by cofactors otherwise.
    pub fn adjugate_fast(&self) -> Result<Self> {
        let d = self.det_bareiss()?;
        if d.is_zero() {
            self.adjugate()
        } else {
            Ok(self.inverse()?.scale(&d))
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[Rational]) -> Result<Rational> {
        Ok(self.mul_vec(v)?.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// `det(t·I − M)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Result<UniPoly> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        if n == 0 {
            return Ok(UniPoly::new(coeffs));
        }
        let id = Self::identity(n);
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            mk = self.mul(&mk)?.add(&id.scale(&coeffs[n - k + 1]))?;
            let t = self.mul(&mk)?.trace()?;
            coeffs[n - k] = -t / Rational::from_integer(k.into());
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Exact determinant of a square rational matrix (fraction-free elimination).
pub fn det_exact(m: &ExactMatrix) -> Result<Rational> {
    m.det_bareiss()
}

pub fn adjugate(m: &ExactMatrix) -> Result<ExactMatrix> {
    m.adjugate()
}

/// Right null space basis with primitive integer vectors.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    m.kernel()
}

/// Determinant of a matrix of forms over one ring. Cofactor expansion below size 5,
/// fraction-free elimination over the polynomial ring from size 5 on.
pub fn det_symbolic(m: &Matrix<GradedForm>) -> Result<GradedForm> {
    m.require_square()?;
    let first = m
        .entries()
        .first()
        .ok_or_else(|| Error::Dimension("determinant of a 0x0 matrix".into()))?;
    let ring = first.ring().clone();
    if let Some(bad) = m.entries().iter().find(|e| e.ring() != &ring) {
        return Err(Error::RingMismatch(format!("{} vs {}", ring, bad.ring())));
    }
    let polys: Matrix<Poly> = m.map(|e| e.poly().clone());
    let det = if m.rows() < 5 {
        polys.det_cofactor()?
    } else {
        polys.det_bareiss()?
    };
    if det.is_zero() {
        // degree of the diagonal product, which is the degree of every term when homogeneous
        let mut deg = Multidegree(vec![0; ring.num_blocks()]);
        for i in 0..m.rows() {
            deg = deg.add(m.get(i, i).degree());
        }
        return Ok(GradedForm::zero(ring, deg));
    }
    GradedForm::from_poly(ring, det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use crate::exactalg::ring::Ring;
    use proptest::prelude::*;

    fn worked_cat() -> ExactMatrix {
        ExactMatrix::from_i64(&[
            &[16, 12, 16, 7],
            &[12, 8, 7, 10],
            &[16, 7, 12, 14],
            &[7, 10, 14, 8],
        ])
        .unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&ExactMatrix::identity(3)).unwrap(), rat(1));
        let eq_rows = ExactMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).unwrap();
        assert_eq!(det_exact(&eq_rows).unwrap(), rat(0));
        assert!(det_exact(&ExactMatrix::zeros(2, 3)).is_err());
        // needs a row swap
        let swap = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(det_exact(&swap).unwrap(), rat(-1));
    }

    #[test]
    fn catalecticant_determinant_paths_agree() {
        let m = worked_cat();
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
        assert_eq!(m.det_bareiss().unwrap(), rat(-4751));
    }

    #[test]
    fn adjugate_two_by_two() {
        let m = ExactMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(
            adjugate(&m).unwrap(),
            ExactMatrix::from_i64(&[&[4, -2], &[-3, 1]]).unwrap()
        );
        assert_eq!(adjugate(&ExactMatrix::identity(4)).unwrap(), ExactMatrix::identity(4));
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&ExactMatrix::zeros(2, 3)).len(), 3);
        let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        for v in kernel_basis(&m) {
            assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = ExactMatrix::diagonal(&[rat(1), rat(-1), rat(0)]);
        // (t-1)(t+1)t = t^3 - t
        assert_eq!(
            m.char_poly().unwrap(),
            UniPoly::new(vec![rat(0), rat(-1), rat(0), rat(1)])
        );
    }

    #[test]
    fn symbolic_diagonal_and_zero_row() {
        let ring = Ring::projective(&["x", "y"]);
        let x = GradedForm::from_poly(ring.clone(), ring.var("x").unwrap()).unwrap();
        let y = GradedForm::from_poly(ring.clone(), ring.var("y").unwrap()).unwrap();
        let zero = GradedForm::zero(ring.clone(), Multidegree::new(&[1]));
        let m = Matrix::from_rows(vec![vec![x.clone(), zero.clone()], vec![zero.clone(), y.clone()]])
            .unwrap();
        assert_eq!(det_symbolic(&m).unwrap(), x.mul(&y).unwrap());
        let z = Matrix::from_rows(vec![vec![zero.clone(), zero.clone()], vec![x, y]]).unwrap();
        assert!(det_symbolic(&z).unwrap().is_zero());
        let other = Ring::projective(&["u", "v"]);
        let u = GradedForm::from_poly(other.clone(), other.var("u").unwrap()).unwrap();
        let mixed = Matrix::from_rows(vec![vec![u, zero.clone()], vec![zero.clone(), zero]]).unwrap();
        assert!(matches!(det_symbolic(&mixed), Err(Error::RingMismatch(_))));
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec((-6i64..=6, 1i64..=3), n * n).prop_map(move |v| {
                let data = v.into_iter().map(|(p, q)| Rational::new(p.into(), q.into())).collect();
                ExactMatrix::new(n, n, data).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(m in small_matrix(6)) {
            prop_assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
        }

        #[test]
        fn adjugate_identity(m in small_matrix(5)) {
            let d = m.det().unwrap();
            let n = m.rows();
            prop_assert_eq!(m.mul(&m.adjugate().unwrap()).unwrap(), ExactMatrix::identity(n).scale(&d));
        }

        #[test]
        fn fast_adjugate_agrees(m in small_matrix(5)) {
            prop_assert_eq!(m.adjugate_fast().unwrap(), m.adjugate().unwrap());
        }

        #[test]
        fn kernel_dimension(m in small_matrix(5)) {
            let k = m.kernel();
            prop_assert_eq!(k.len() + m.rank(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn char_poly_constant_term(m in small_matrix(5)) {
            let p = m.char_poly().unwrap();
            let n = m.rows();
            let sign = if n % 2 == 0 { rat(1) } else { rat(-1) };
            prop_assert_eq!(p.coeff(0), sign * m.det().unwrap());
        }
    }
}
