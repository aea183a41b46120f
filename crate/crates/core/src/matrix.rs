//! Dense matrices over exact rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::Rational;

/// Row-major dense matrix of [`Rational`] entries.
///
/// Zero-row and zero-column matrices are legal; they model linear maps to or
/// from the zero space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row-major data; `None` when the length is wrong.
    pub fn from_data(rows: usize, cols: usize, data: Vec<Rational>) -> Option<Self> {
        (data.len() == rows * cols).then_some(RationalMatrix { rows, cols, data })
    }

    /// Builds a matrix from a list of rows with the expected shape.
    ///
    /// A matrix with no entries may be given as an empty row list (`[]`)
    /// regardless of which extent is zero. Returns `None` on a shape mismatch.
    pub fn from_rows(rows: usize, cols: usize, literal: &[Vec<Rational>]) -> Option<Self> {
        if literal.is_empty() && rows * cols == 0 {
            return Some(Self::zeros(rows, cols));
        }
        if literal.len() != rows || literal.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(RationalMatrix { rows, cols, data: literal.iter().flatten().cloned().collect() })
    }

    /// Convenience constructor from small integers, inferring the shape.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged integer matrix");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Rational::from_integer(x.into()))).collect();
        RationalMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    /// When the inner dimensions disagree.
    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// When `v.len() != self.cols()`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &RationalMatrix) -> RationalMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        crate::linalg::Echelon::from_rows(self.to_rows(), self.cols).rank()
    }
}

/// Formats as `[[a,b],[c,d]]`; a matrix with no entries prints as `[]`.
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows * self.cols == 0 {
            return f.write_str("[]");
        }
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(",")?;
            }
            write_vector(f, self.row(r))?;
        }
        f.write_str("]")
    }
}

/// Writes `[a,b,c]` with rationals in `n` or `n/d` form.
pub fn write_vector(f: &mut dyn fmt::Write, v: &[Rational]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", x)?;
    }
    f.write_str("]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn empty_literal_accepted_for_zero_extent_shapes() {
        assert_eq!(RationalMatrix::from_rows(0, 1, &[]), Some(RationalMatrix::zeros(0, 1)));
        assert_eq!(RationalMatrix::from_rows(2, 0, &[]), Some(RationalMatrix::zeros(2, 0)));
        assert_eq!(RationalMatrix::from_rows(2, 0, &[vec![], vec![]]), Some(RationalMatrix::zeros(2, 0)));
        assert_eq!(RationalMatrix::from_rows(1, 1, &[]), None);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let row = vec![Rational::one(), Rational::zero()];
        assert!(RationalMatrix::from_rows(1, 1, &[row]).is_none());
    }

    #[test]
    fn product_and_display() {
        let a = RationalMatrix::from_ints(&[&[1, 2], &[0, -1]]);
        let b = RationalMatrix::from_ints(&[&[3], &[4]]);
        assert_eq!(a.mul(&b), RationalMatrix::from_ints(&[&[11], &[-4]]));
        assert_eq!(a.to_string(), "[[1,2],[0,-1]]");
        assert_eq!(RationalMatrix::zeros(0, 3).to_string(), "[]");
        let half = RationalMatrix::from_data(1, 1, vec![Rational::new(1.into(), 2.into())]).unwrap();
        assert_eq!(half.to_string(), "[[1/2]]");
    }

    #[test]
    fn block_diagonal_layout() {
        let a = RationalMatrix::from_ints(&[&[-1]]);
        let b = RationalMatrix::from_ints(&[&[2]]);
        assert_eq!(a.block_diag(&b), RationalMatrix::from_ints(&[&[-1, 0], &[0, 2]]));
        assert_eq!(RationalMatrix::zeros(0, 0).block_diag(&b), b);
    }
}
