//! Dense complex linear algebra, self-contained: seeded complex Gaussian
//! sampling, norms, LU solves, and a general non-Hermitian eigensolver.
//!
//! Everything works on `DenseMatrix`, a row-major matrix of `Complex64`.
//! Tolerances are fixed here once and shared by the rest of the crate.

pub mod eig;
pub mod lu;
pub mod rng;

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Residual tolerance for linear solves, relative to the HS norm of the matrix.
pub const TOL_SOLVE: f64 = 1e-10;
/// Residual tolerance for eigenvalues, relative to the HS norm of the matrix.
pub const TOL_EIG: f64 = 1e-8;
/// Pivot floor for LU, relative to the HS norm of the matrix.
pub const PIVOT_FLOOR_REL: f64 = 1e-30;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("singular matrix: pivot {pivot:.3e} below floor {floor:.3e} at column {col}")]
    SingularMatrix { pivot: f64, floor: f64, col: usize },
    #[error("QR iteration did not converge for eigenvalue index {index} within {iters} iterations")]
    NoConvergence { index: usize, iters: usize },
}

/// Row-major dense complex matrix. Entries are required to be finite; the
/// constructors check this so that NaN/Inf never propagate silently into a
/// spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        for (k, v) in data.iter().enumerate() {
            assert!(
                v.re.is_finite() && v.im.is_finite(),
                "non-finite entry {v} at flat index {k}"
            );
        }
        DenseMatrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Two disjoint row slices, needed by rotation updates.
    pub fn two_rows_mut(&mut self, i: usize, k: usize) -> (&mut [C64], &mut [C64]) {
        assert!(i < k, "rows must be distinct and ordered");
        let (a, b) = self.data.split_at_mut(k * self.cols);
        (
            &mut a[i * self.cols..(i + 1) * self.cols],
            &mut b[..self.cols],
        )
    }

    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// x^H applied from the left: returns conj-transpose(M) * x as a vector.
    pub fn adjoint_mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (j, a) in self.row(i).iter().enumerate() {
                out[j] += a.conj() * xi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = out.row_mut(i);
                for j in 0..orow.len() {
                    out_row[j] += a * orow[j];
                }
            }
        }
        out
    }

    pub fn scaled(&self, a: C64) -> DenseMatrix {
        let data = self.data.iter().map(|v| v * a).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Largest singular value, estimated by power iteration on M^H M from a
    /// fixed deterministic start vector. A lower bound that is within a few
    /// percent for the matrices used here; adequate for regime checks and
    /// residual denominators, not a substitute for a full SVD.
    pub fn operator_norm_estimate(&self, iters: usize) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        let n = self.cols;
        let mut v: Vec<C64> = (0..n)
            .map(|j| C64::from_polar(1.0 / (n as f64).sqrt(), 0.7 * j as f64))
            .collect();
        let mut sigma = 0.0;
        for _ in 0..iters.max(1) {
            let w = self.mul_vec(&v);
            let mut u = self.adjoint_mul_vec(&w);
            let norm = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            for x in &mut u {
                *x /= norm;
            }
            sigma = norm.sqrt();
            v = u;
        }
        sigma
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hs_norm_identity() {
        assert!((DenseMatrix::identity(3).hs_norm() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hs_norm_zero() {
        assert_eq!(DenseMatrix::zeros(4, 7).hs_norm(), 0.0);
    }

    #[test]
    #[should_panic(expected = "non-finite")]
    fn rejects_nan_entries() {
        DenseMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]);
    }

    #[test]
    fn matmul_identity() {
        let m = DenseMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64, j as f64));
        let prod = m.matmul(&DenseMatrix::identity(3));
        assert_eq!(prod, m);
    }

    #[test]
    fn operator_norm_diagonal() {
        let mut m = DenseMatrix::zeros(4, 4);
        for (i, s) in [0.5, 3.0, 1.0, 2.0].iter().enumerate() {
            m[(i, i)] = C64::new(*s, 0.0);
        }
        let est = m.operator_norm_estimate(100);
        assert!((est - 3.0).abs() < 1e-6, "estimate {est}");
    }

    #[test]
    fn adjoint_mul_matches_matmul() {
        let m = DenseMatrix::from_fn(3, 2, |i, j| C64::new(i as f64 + 0.5, j as f64 - 1.0));
        let x = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.25), C64::new(0.0, 1.0)];
        let got = m.adjoint_mul_vec(&x);
        for j in 0..2 {
            let want: C64 = (0..3).map(|i| m[(i, j)].conj() * x[i]).sum();
            assert!((got[j] - want).norm() < 1e-14);
        }
    }
}
