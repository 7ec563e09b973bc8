//! Dense exact linear algebra over arbitrary-precision rationals.
//!
//! Every operation here is exact: elimination picks the first nonzero pivot
//! in a column and never rounds. Dimensions in this crate stay small (at most
//! eight), so dense row-major storage is all we need.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Vector = Vec<Rational>;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn scale_vector(v: &[Rational], s: &Rational) -> Vector {
    v.iter().map(|x| x * s).collect()
}

/// Returns `λ` with `v = λ·w`, if one exists. `w` must be nonzero.
pub fn vector_ratio(v: &[Rational], w: &[Rational]) -> Option<Rational> {
    let k = w.iter().position(|x| !x.is_zero())?;
    let lambda = &v[k] / &w[k];
    v.iter()
        .zip(w)
        .all(|(a, b)| *a == &lambda * b)
        .then_some(lambda)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must share one length.
    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_rows(&rows).expect("rectangular literal")
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

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul_matrix(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Adds `weight · a ⊗ b` in place.
    pub fn add_outer(&mut self, weight: &Rational, a: &[Rational], b: &[Rational]) {
        for (r, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let wx = weight * x;
            for (c, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    self[(r, c)] += &wx * y;
                }
            }
        }
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead);
            let inv = m[(lead, c)].recip();
            for j in c..m.cols {
                let v = &m[(lead, j)] * &inv;
                m[(lead, j)] = v;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for j in c..m.cols {
                    let delta = &f * &m[(lead, j)];
                    if !delta.is_zero() {
                        m[(r, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// The nonzero rows of the reduced row echelon form: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Self {
        let (r, pivots) = self.rref_with_pivots();
        Self::from_fn(pivots.len(), self.cols, |i, j| r[(i, j)].clone())
    }

    /// Basis of the right null space, one vector per free column of the rref.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref_with_pivots();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &pivot;
                for j in c..n {
                    let delta = &f * &m[(c, j)];
                    m[(r, j)] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    /// Solves `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vector> {
        if !self.is_square() || b.len() != self.rows {
            return Err(Error::ShapeMismatch("solve needs a square system".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, n + 1, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Ok((0..n).map(|r| red[(r, n)].clone()).collect())
    }

    /// Returns `λ` with `self = λ · other` (`λ` may be zero), if such a scalar exists.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        if other.is_zero() {
            return self.is_zero().then(Rational::zero);
        }
        vector_ratio(&self.data, &other.data)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mul_matrix(rhs).expect("matrix shapes agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invert_identity() {
        assert_eq!(Matrix::identity(3).invert().unwrap(), Matrix::identity(3));
    }

    #[test]
    fn invert_two_by_two() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 2]]);
        let inv = m.invert().unwrap();
        let expected = Matrix::from_rows(&[vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)]]).unwrap();
        assert_eq!(inv, expected);
        assert_eq!(&m * &inv, Matrix::identity(2));
    }

    #[test]
    fn invert_rank_one_is_singular() {
        let m = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.invert(), Err(Error::SingularMatrix));
        assert_eq!(m.determinant().unwrap(), int(0));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(Matrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_codimension_one() {
        let m = Matrix::from_i64(&[&[1, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
        }
        assert_eq!(Matrix::from_rows(&k).unwrap().rank(), 2);
    }

    #[test]
    fn kernel_of_repeated_row() {
        let m = Matrix::from_i64(&[&[1, 0, 0], &[1, 0, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
            assert!(v[0].is_zero());
        }
    }

    #[test]
    fn solve_examples() {
        assert_eq!(Matrix::identity(2).solve(&[int(3), int(4)]).unwrap(), vec![int(3), int(4)]);
        let d = Matrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(d.solve(&[int(1), int(1)]).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).solve(&[int(1), int(0)]), Err(Error::SingularMatrix));
    }

    #[test]
    fn rref_examples() {
        assert_eq!(Matrix::identity(4).rref(), Matrix::identity(4));
        assert_eq!(Matrix::from_i64(&[&[2, 4]]).rref(), Matrix::from_i64(&[&[1, 2]]));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rref(), Matrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = Matrix::from_i64(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3·-2 - 4·5) + 1(1·-2 - 4·0) = -52 - 2
        assert_eq!(m.determinant().unwrap(), int(-54));
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
    }

    #[test]
    fn ratio_allows_zero_sides() {
        let z = Matrix::zeros(2, 2);
        let i = Matrix::identity(2);
        assert_eq!(z.ratio_to(&i), Some(int(0)));
        assert_eq!(i.ratio_to(&z), None);
        assert_eq!(z.ratio_to(&z), Some(int(0)));
        assert_eq!(i.scale(&rat(-3, 2)).ratio_to(&i), Some(rat(-3, 2)));
    }
}
