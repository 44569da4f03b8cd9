//! LU factorization with partial pivoting, plus the solve / determinant /
//! inverse helpers built on it.

use super::{C64, DenseMatrix, LinalgError, PIVOT_FLOOR_REL};

pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

/// Factor PM = LU with row pivoting. Fails with SingularMatrix when the best
/// available pivot falls below PIVOT_FLOOR_REL times the HS norm of M.
pub fn factor(m: &DenseMatrix) -> Result<LuFactors, LinalgError> {
    assert!(m.is_square(), "LU requires a square matrix");
    let n = m.rows();
    let floor = PIVOT_FLOOR_REL * m.hs_norm();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;

    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[(k, k)].norm();
        for i in k + 1..n {
            let mag = lu[(i, k)].norm();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag <= floor {
            return Err(LinalgError::SingularMatrix { pivot: best_mag, floor, col: k });
        }
        if best != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            perm.swap(k, best);
            swaps += 1;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            let (row_k, row_i) = lu.two_rows_mut(k, i);
            for j in k + 1..n {
                row_i[j] -= factor * row_k[j];
            }
        }
    }
    Ok(LuFactors { lu, perm, swaps })
}

impl LuFactors {
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "rhs length must match dimension");
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for (&lij, &xj) in self.lu.row(i)[..i].iter().zip(&x[..i]) {
                s -= lij * xj;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            let row = self.lu.row(i);
            for (&lij, &xj) in row[i + 1..].iter().zip(&x[i + 1..]) {
                s -= lij * xj;
            }
            x[i] = s / row[i];
        }
        x
    }

    pub fn det(&self) -> C64 {
        let mut d = C64::new(if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
        for i in 0..self.lu.rows() {
            d *= self.lu[(i, i)];
        }
        d
    }
}

pub fn solve_linear(m: &DenseMatrix, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
    Ok(factor(m)?.solve(b))
}

pub fn det(m: &DenseMatrix) -> Result<C64, LinalgError> {
    Ok(factor(m)?.det())
}

pub fn inverse(m: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let n = m.rows();
    let f = factor(m)?;
    let mut out = DenseMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        let col = f.solve(&e);
        e[j] = C64::new(0.0, 0.0);
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}
