//! Exact Gauss-Jordan elimination over the rationals.
//!
//! Pivoting is deterministic: columns are scanned left to right and the pivot
//! is the first remaining row with a nonzero entry in that column. The reduced
//! row echelon form is unique, so every derived quantity (rank, quotient
//! coordinates, solutions with free variables set to zero) is reproducible.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::matrix::RationalMatrix;
use crate::Rational;

/// Reduced row echelon form of a list of row vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// Nonzero RREF rows; row `i` has a leading one in column `pivots[i]`.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn from_rows(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..ncols {
            if next == rows.len() {
                break;
            }
            let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(next, found);
            let inv = rows[next][col].recip();
            for x in rows[next].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        Echelon { ncols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.ncols - self.rank());
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.ncols {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    /// Reduces `v` modulo the row space; the result vanishes on pivot columns.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Solves `a · x = b`, returning the solution with all free variables zero.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let augmented: Vec<Vec<Rational>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let ech = Echelon::from_rows(augmented, n + 1);
    if ech.pivots().last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Basis of the right null space `{x : a · x = 0}`, one vector per free column.
pub fn null_space(a: &RationalMatrix) -> Vec<Vec<Rational>> {
    let ech = Echelon::from_rows(a.to_rows(), a.cols());
    ech.free_columns()
        .into_iter()
        .map(|f| {
            let mut x = vec![Rational::zero(); a.cols()];
            x[f] = Rational::one();
            for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Whether `v` lies in the column span of `a`.
pub fn in_column_span(a: &RationalMatrix, v: &[Rational]) -> bool {
    solve(a, v).is_some()
}
