//! Dense exact linear algebra over the rational-function field.
//!
//! Gaussian elimination with pivot selection by lowest complexity (fewest
//! numerator/denominator terms among the nonzero candidates) — the pivot
//! choice only affects intermediate expression swell, never the result.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Matrix {
        let mut m = Matrix::zero(nvars, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one(nvars);
        }
        m
    }

    pub fn from_fn(nvars: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(nvars, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                *m.at_mut(r, c) = f(r, c);
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

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    fn complexity(s: &Scalar) -> usize {
        s.numerator().num_terms() + s.denominator().num_terms()
    }

    /// Row echelon reduction in place over columns `0..limit`, returning the
    /// pivot column list. Full reduced form (entries above pivots cleared).
    fn reduce(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            // lowest-complexity nonzero pivot in this column
            let mut best: Option<(usize, usize)> = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    let c = Self::complexity(self.at(r, col));
                    if best.map(|(_, bc)| c < bc).unwrap_or(true) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = self.at(row, col).inverse().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.at(row, c).mul_ref(&inv);
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub_ref(&factor.mul_ref(self.at(row, c)));
                        *self.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Generic rank over the fraction field.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.reduce(self.cols).len()
    }

    /// Determinant by fraction-field elimination (square matrices).
    pub fn det(&self, nvars: usize) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut work = self.clone();
        let mut det = Scalar::one(nvars);
        for col in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for r in col..n {
                if !work.at(r, col).is_zero() {
                    let c = Self::complexity(work.at(r, col));
                    if best.map(|(_, bc)| c < bc).unwrap_or(true) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((prow, _)) = best else {
                return Scalar::zero(nvars);
            };
            if prow != col {
                work.swap_rows(col, prow);
                det = -det;
            }
            let pivot = work.at(col, col).clone();
            det = det.mul_ref(&pivot);
            let inv = pivot.inverse().expect("pivot is nonzero");
            for r in col + 1..n {
                if !work.at(r, col).is_zero() {
                    let factor = work.at(r, col).mul_ref(&inv);
                    for c in col..n {
                        let v = work.at(r, c).sub_ref(&factor.mul_ref(work.at(col, c)));
                        *work.at_mut(r, c) = v;
                    }
                }
            }
        }
        det
    }

    /// Exact inverse; errors when singular as a rational-function matrix.
    pub fn inverse(&self, nvars: usize) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut work = Matrix::zero(nvars, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                *work.at_mut(r, c) = self.at(r, c).clone();
            }
            *work.at_mut(r, n + r) = Scalar::one(nvars);
        }
        let pivots = work.reduce(n);
        if pivots.len() != n {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zero(nvars, n, n);
        for r in 0..n {
            for c in 0..n {
                *inv.at_mut(r, c) = work.at(r, n + c).clone();
            }
        }
        Ok(inv)
    }

    /// Solves `A x = b` exactly. Errors when the system is inconsistent;
    /// free variables (if any) are set to zero.
    pub fn solve(&self, nvars: usize, b: &[Scalar]) -> Result<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut work = Matrix::zero(nvars, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *work.at_mut(r, c) = self.at(r, c).clone();
            }
            *work.at_mut(r, self.cols) = b[r].clone();
        }
        let pivots = work.reduce(self.cols);
        // inconsistency: a row 0 = nonzero
        for r in pivots.len()..self.rows {
            if !work.at(r, self.cols).is_zero() {
                return Err(Error::SingularMatrix);
            }
        }
        let mut x = vec![Scalar::zero(nvars); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = work.at(row, self.cols).clone();
        }
        Ok(x)
    }
}
