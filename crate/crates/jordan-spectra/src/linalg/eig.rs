//! General complex eigensolver: balancing, Householder reduction to upper
//! Hessenberg form, then explicit single-shift QR with Wilkinson shifts.
//! Eigenvalues only, no Schur vectors.

use super::lu;
use super::{C64, DenseMatrix, LinalgError};

const MAX_ITERS_PER_EIGENVALUE: usize = 60;
const EXCEPTIONAL_SHIFT_PERIOD: usize = 15;

/// All eigenvalues of a general square complex matrix (with multiplicity).
/// Order follows the deflation sequence of the QR iteration, not any sort.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<C64>, LinalgError> {
    assert!(m.is_square(), "eigenvalues require a square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    hessenberg_qr(&mut a)
}

/// Parlett-Reinsch balancing by radix-2 diagonal similarity. Scaling by exact
/// powers of two is lossless in binary floating point, so this can only help.
fn balance(a: &mut DenseMatrix) {
    let n = a.rows();
    let radix: f64 = 2.0;
    let radix_sq = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while c >= g {
                f /= radix;
                c /= radix_sq;
            }
            if (c + r) / f < 0.95 * s {
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
                done = false;
            }
        }
        if done {
            break;
        }
    }
}

/// Reduce to upper Hessenberg form by complex Householder reflectors,
/// H = I - tau v v^H with tau real.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let m = n - k - 1;
        let mut v: Vec<C64> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = super::vec_norm(&v);
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        // alpha carries the phase of x0 so v = x - alpha e1 never cancels.
        let alpha = if x0.norm() == 0.0 {
            C64::new(-xnorm, 0.0)
        } else {
            -(x0 / x0.norm()) * xnorm
        };
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sq;

        // Left: rows k+1..n, columns k..n. First accumulate w_j = sum_i
        // conj(v_i) a[k+1+i][j] row by row, then update row by row.
        let mut w = vec![C64::new(0.0, 0.0); n - k];
        for (i, vi) in v.iter().enumerate() {
            let vi = vi.conj();
            if vi.norm_sqr() == 0.0 {
                continue;
            }
            let row = a.row(k + 1 + i);
            for (wj, &aj) in w.iter_mut().zip(&row[k..n]) {
                *wj += vi * aj;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let f = tau * vi;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            let row = a.row_mut(k + 1 + i);
            for (&wj, aj) in w.iter().zip(&mut row[k..n]) {
                *aj -= f * wj;
            }
        }

        // Right: all rows, columns k+1..n. Row-major friendly as is.
        for i in 0..n {
            let row = a.row_mut(i);
            let mut s = C64::new(0.0, 0.0);
            for (j, &vj) in v.iter().enumerate() {
                s += row[k + 1 + j] * vj;
            }
            s *= tau;
            if s.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                row[k + 1 + j] -= s * vj.conj();
            }
        }

        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Roots of the 2x2 block [[a, b], [c, d]], computed from the larger root by
/// magnitude and det/big for the other to dodge cancellation.
fn roots_2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let mid = (a + d) * 0.5;
    let det = a * d - b * c;
    let sq = (mid * mid - det).sqrt();
    let r1 = mid + sq;
    let r2 = mid - sq;
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if big.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    (big, det / big)
}

/// Givens pair (c real, s complex) with G = [[c, s], [-conj(s), c]] mapping
/// (a, b) to (rho * phase(a), 0).
fn givens(a: C64, b: C64) -> (f64, C64) {
    let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if rho == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let amag = a.norm();
    if amag == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    (amag / rho, (a / amag) * b.conj() / rho)
}

fn hessenberg_qr(h: &mut DenseMatrix) -> Result<Vec<C64>, LinalgError> {
    let n = h.rows();
    let whole_norm = h.hs_norm();
    let eps = f64::EPSILON;
    let mut eigs: Vec<C64> = Vec::with_capacity(n);
    let mut en = n - 1;
    let mut its = 0usize;

    loop {
        // Deflation scan: largest l in 1..=en with a negligible subdiagonal,
        // else the block starts at 0.
        let mut l = 0;
        for i in (1..=en).rev() {
            let mut tst = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
            if tst == 0.0 {
                tst = whole_norm;
            }
            if h[(i, i - 1)].norm() <= eps * tst {
                l = i;
                break;
            }
        }

        if l == en {
            eigs.push(h[(en, en)]);
            if en == 0 {
                break;
            }
            en -= 1;
            its = 0;
            continue;
        }
        if l + 1 == en {
            let (r1, r2) = roots_2x2(h[(l, l)], h[(l, en)], h[(en, l)], h[(en, en)]);
            eigs.push(r1);
            eigs.push(r2);
            if en == 1 {
                break;
            }
            en -= 2;
            its = 0;
            continue;
        }

        if its == MAX_ITERS_PER_EIGENVALUE {
            return Err(LinalgError::NoConvergence { index: en, iters: its });
        }
        its += 1;

        // Block size is at least 3 here, so en >= 2 and the exceptional
        // shift below can always look two entries up the subdiagonal.
        let shift = if its.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
            C64::new(h[(en, en - 1)].norm() + h[(en - 1, en - 2)].norm(), 0.0)
        } else {
            let (r1, r2) =
                roots_2x2(h[(en - 1, en - 1)], h[(en - 1, en)], h[(en, en - 1)], h[(en, en)]);
            let d = h[(en, en)];
            if (r1 - d).norm() <= (r2 - d).norm() { r1 } else { r2 }
        };

        for i in l..=en {
            h[(i, i)] -= shift;
        }
        // QR by Givens sweeps down the subdiagonal, then RQ^H back up.
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(en - l);
        for i in l..en {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            let (top, bot) = h.two_rows_mut(i, i + 1);
            for j in i..=en {
                let x = top[j];
                let y = bot[j];
                top[j] = c * x + s * y;
                bot[j] = -s.conj() * x + c * y;
            }
            h[(i + 1, i)] = C64::new(0.0, 0.0);
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let i = l + idx;
            let last_row = (i + 1).min(en);
            for r in l..=last_row {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = c * x + s.conj() * y;
                h[(r, i + 1)] = -s * x + c * y;
            }
        }
        for i in l..=en {
            h[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Cheap estimate of the smallest singular value via two steps of inverse
/// iteration from a fixed spread-phase start. Exactly singular input gives 0.
/// Used for residual spot checks, where the true value is near zero anyway.
pub fn min_singular_estimate(m: &DenseMatrix) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let f = match lu::factor(m) {
        Ok(f) => f,
        Err(_) => return 0.0,
    };
    let scale = 1.0 / (n as f64).sqrt();
    let x0: Vec<C64> = (0..n).map(|j| C64::from_polar(scale, 0.7 * j as f64)).collect();
    let x1 = f.solve(&x0);
    let n1 = super::vec_norm(&x1);
    if n1 == 0.0 || !n1.is_finite() {
        return 0.0;
    }
    let x1n: Vec<C64> = x1.iter().map(|v| v / n1).collect();
    let x2 = f.solve(&x1n);
    let n2 = super::vec_norm(&x2);
    if n2 == 0.0 || !n2.is_finite() {
        return 0.0;
    }
    1.0 / n2
}

/// Largest distance produced by greedily pairing two equal-size multisets of
/// complex numbers, closest pairs first. With point sets separated by much
/// more than the pairing tolerance this equals the optimal matching bound.
pub fn multiset_max_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets must have equal size");
    let n = a.len();
    let mut used_a = vec![false; n];
    let mut used_b = vec![false; n];
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mut best = f64::INFINITY;
        let mut pair = (0usize, 0usize);
        for i in 0..n {
            if used_a[i] {
                continue;
            }
            for j in 0..n {
                if used_b[j] {
                    continue;
                }
                let d = (a[i] - b[j]).norm();
                if d < best {
                    best = d;
                    pair = (i, j);
                }
            }
        }
        used_a[pair.0] = true;
        used_b[pair.1] = true;
        worst = worst.max(best);
    }
    worst
}
