//! Dense exact-rational matrices.
//!
//! Small square matrices over [`Rat`] with exact Gauss–Jordan inversion;
//! sized for the frame algebra's `(n+1)×(n+1)` workloads, not for bulk
//! numerics.

use num_traits::{One, Zero};

use crate::ratio::Rat;
use crate::{Error, Result};

/// Row-major dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    /// Builds from column vectors.
    pub fn from_cols(cols: &[Vec<Rat>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Right-multiplies by a diagonal matrix given as its entries.
    pub fn mul_diag(&self, diag: &[Rat]) -> Matrix {
        assert_eq!(self.cols, diag.len());
        let mut out = self.clone();
        for i in 0..out.rows {
            for j in 0..out.cols {
                out[(i, j)] *= &diag[j];
            }
        }
        out
    }

    /// Exact inverse via Gauss–Jordan elimination with row pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &p;
                inv[(col, j)] /= &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] -= t;
                    let t = &factor * &inv[(col, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Ok(inv)
    }

    /// Rank over the rationals (destructive elimination on a copy).
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let p = a[(rank, col)].clone();
            for r in (rank + 1)..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &p;
                for j in col..a.cols {
                    let t = &factor * &a[(rank, j)];
                    a[(r, j)] -= t;
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rint};

    #[test]
    fn inverse_2x2_hand_checked() {
        // [[1,-1],[1/2,1/2]]⁻¹ = [[1/2,1],[-1/2,1]]
        let m = Matrix::from_rows(&[
            vec![rint(1), rint(-1)],
            vec![rat(1, 2), rat(1, 2)],
        ]);
        let inv = m.inverse().unwrap();
        let expected = Matrix::from_rows(&[
            vec![rat(1, 2), rint(1)],
            vec![rat(-1, 2), rint(1)],
        ]);
        assert_eq!(inv, expected);
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(inv.mul(&m), Matrix::identity(2));
    }

    #[test]
    fn singular_is_reported() {
        let m = Matrix::from_rows(&[
            vec![rint(1), rint(2)],
            vec![rint(2), rint(4)],
        ]);
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn mul_vec_and_diag() {
        let m = Matrix::from_rows(&[
            vec![rint(1), rint(2)],
            vec![rint(3), rint(4)],
        ]);
        assert_eq!(m.mul_vec(&[rint(1), rint(1)]), vec![rint(3), rint(7)]);
        let d = m.mul_diag(&[rint(2), rint(10)]);
        assert_eq!(d.row(0), &[rint(2), rint(20)]);
        assert_eq!(d.row(1), &[rint(6), rint(40)]);
    }

    #[test]
    fn inverse_needs_pivot_swap() {
        let m = Matrix::from_rows(&[
            vec![rint(0), rint(1)],
            vec![rint(1), rint(0)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), Matrix::identity(2));
    }

    #[test]
    fn rank_of_rectangular() {
        // Rows span a 2-dimensional space.
        let m = Matrix::from_rows(&[
            vec![rint(1), rint(0), rint(-1)],
            vec![rint(0), rint(1), rint(-1)],
            vec![rint(1), rint(1), rint(-2)],
        ]);
        assert_eq!(m.rank(), 2);
    }
}
