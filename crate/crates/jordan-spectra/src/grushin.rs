//! Augmented-operator route to the spectrum: the (n+1)-dimensional bordered
//! problem is invertible even where A_delta - z is not, and its lower-right
//! inverse entry g(z, Q) vanishes exactly at the eigenvalues of A_delta.
//! This module builds the closed-form unperturbed inverse blocks, evaluates
//! g exactly and by Neumann series, and counts zeros by winding number.

use std::f64::consts::PI;

use thiserror::Error;

use crate::asymptotics::big_g;
use crate::jordan::{RegimeReport, regime_report};
use crate::linalg::lu::solve_linear;
use crate::linalg::{C64, DenseMatrix, LinalgError};

/// Default truncation order of the Neumann series; the geometric tail is
/// below double precision by then whenever the contraction condition holds.
pub const DEFAULT_K_MAX: usize = 30;

const CONTOUR_MIN_NODES: usize = 256;
const CONTOUR_EVAL_BUDGET: usize = 1 << 16;
const CONTOUR_MODULUS_FLOOR: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum GrushinError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("Neumann contraction violated: delta |Q| G(|z|) = {product:.3e} >= 0.5")]
    RegimeViolation { product: f64 },
    #[error(
        "contour passes too close to a zero: min modulus {min_modulus:.3e} \
         vs max {max_modulus:.3e}"
    )]
    ContourTooClose { min_modulus: f64, max_modulus: f64 },
    #[error("contour refinement exhausted the {evaluations}-evaluation budget")]
    NodeBudgetExceeded { evaluations: usize },
}

/// Closed-form inverse blocks of the unperturbed bordered operator at z.
pub struct GrushinBlocks {
    pub n: usize,
    pub z: C64,
    /// Upper-left n x n block: entries z^(i-j-1) for i > j, zero otherwise.
    pub e0: DenseMatrix,
    /// Right column: (1, z, ..., z^(n-1)) transposed.
    pub e_plus0: Vec<C64>,
    /// Bottom row: (z^(n-1), ..., z, 1).
    pub e_minus0: Vec<C64>,
    /// Bottom-right scalar: z^n.
    pub e_mp0: C64,
}

impl GrushinBlocks {
    /// The four blocks reassembled into the full (n+1) x (n+1) inverse.
    pub fn assembled(&self) -> DenseMatrix {
        let n = self.n;
        let mut m = DenseMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.e0[(i, j)];
            }
            m[(i, n)] = self.e_plus0[i];
            m[(n, i)] = self.e_minus0[i];
        }
        m[(n, n)] = self.e_mp0;
        m
    }
}

/// The bordered operator for A_delta = A0 + delta Q at spectral parameter z:
/// top-left A_delta - z, right border column e_n, bottom border row e_1^T.
pub fn augmented_operator(q: &DenseMatrix, delta: f64, z: C64) -> DenseMatrix {
    assert!(q.is_square(), "perturbation must be square");
    let n = q.rows();
    assert!(n >= 2);
    let mut a = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = q[(i, j)] * delta;
        }
        a[(i, i)] -= z;
        if i + 1 < n {
            a[(i, i + 1)] += C64::new(1.0, 0.0);
        }
    }
    a[(n - 1, n)] = C64::new(1.0, 0.0);
    a[(n, 0)] = C64::new(1.0, 0.0);
    a
}

/// Inverse of the unperturbed bordered operator, built from the truncated
/// geometric series of the nilpotent shift (the whole inverse is a cyclic
/// column permutation of the lower-triangular power matrix z^(i-k)), then
/// validated against the defining identity before the blocks are split out.
pub fn unperturbed_blocks(z: C64, n: usize) -> GrushinBlocks {
    assert!(n >= 2, "bordered problem needs n >= 2");
    assert!(z.norm() < 1.0, "blocks are used in the interior regime |z| < 1");
    let dim = n + 1;
    let mut zpow = Vec::with_capacity(dim);
    zpow.push(C64::new(1.0, 0.0));
    for m in 1..dim {
        let prev = zpow[m - 1];
        zpow.push(prev * z);
    }
    let inv = DenseMatrix::from_fn(dim, dim, |i, j| {
        let k = (j + 1) % dim;
        if i >= k { zpow[i - k] } else { C64::new(0.0, 0.0) }
    });

    // The unperturbed operator has at most two entries per row, so the
    // product with the candidate inverse is checked sparsely in O(n^2).
    let one = C64::new(1.0, 0.0);
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..dim {
            let got = inv[(i + 1, j)] - z * inv[(i, j)];
            let want = if i == j { one } else { C64::new(0.0, 0.0) };
            dev = dev.max((got - want).norm());
        }
    }
    for j in 0..dim {
        let want = if j == dim - 1 { one } else { C64::new(0.0, 0.0) };
        dev = dev.max((inv[(0, j)] - want).norm());
    }
    assert!(
        dev <= 1e-12 * (1.0 + inv.max_abs()),
        "inverse block identity failed at z = {z}: deviation {dev:.3e}"
    );

    let e0 = DenseMatrix::from_fn(n, n, |i, j| inv[(i, j)]);
    let e_plus0 = (0..n).map(|i| inv[(i, n)]).collect();
    let e_minus0 = (0..n).map(|j| inv[(n, j)]).collect();
    let e_mp0 = inv[(n, n)];
    GrushinBlocks { n, z, e0, e_plus0, e_minus0, e_mp0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Neumann,
    FirstOrder,
}

/// One evaluation of the effective scalar g(z, Q), tagged with how it was
/// computed and which approximation regimes held at this z.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveEval {
    pub value: C64,
    pub method: Method,
    pub regime: RegimeReport,
}

/// g(z, Q) via one bordered linear solve. Exact up to solver accuracy and
/// valid for any z where the bordered matrix is invertible.
pub fn effective_hamiltonian_exact(
    z: C64,
    q: &DenseMatrix,
    delta: f64,
) -> Result<EffectiveEval, GrushinError> {
    let n = q.rows();
    let a = augmented_operator(q, delta, z);
    let mut rhs = vec![C64::new(0.0, 0.0); n + 1];
    rhs[n] = C64::new(1.0, 0.0);
    let x = solve_linear(&a, &rhs)?;
    Ok(EffectiveEval {
        value: x[n],
        method: Method::Exact,
        regime: regime_report(n, delta, q.hs_norm(), z.norm()),
    })
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// g(z, Q) via the Neumann series around the unperturbed blocks, truncated
/// after the delta^k_max term. Requires the contraction condition
/// delta |Q|_HS G(|z|) < 1/2; the truncation tail is then geometric.
pub fn effective_hamiltonian_neumann(
    z: C64,
    q: &DenseMatrix,
    delta: f64,
    k_max: usize,
) -> Result<EffectiveEval, GrushinError> {
    let n = q.rows();
    let q_norm = q.hs_norm();
    let product = delta * q_norm * big_g(n, z.norm());
    if product.is_nan() || product >= 0.5 {
        return Err(GrushinError::RegimeViolation { product });
    }
    let blocks = unperturbed_blocks(z, n);
    let mut value = blocks.e_mp0;
    let mut w = q.mul_vec(&blocks.e_plus0);
    let mut coeff = C64::new(1.0, 0.0);
    for k in 1..=k_max {
        coeff *= -delta;
        value += coeff * dot(&blocks.e_minus0, &w);
        if k < k_max {
            w = q.mul_vec(&blocks.e0.mul_vec(&w));
        }
    }
    Ok(EffectiveEval {
        value,
        method: Method::Neumann,
        regime: regime_report(n, delta, q_norm, z.norm()),
    })
}

/// Two-term approximation z^n - delta sum_jk q_jk z^(n-1-j+k), 0-based j, k.
pub fn first_order_approx(z: C64, q: &DenseMatrix, delta: f64) -> C64 {
    let n = q.rows();
    assert!(n >= 2);
    let mut zpow = Vec::with_capacity(2 * n - 1);
    zpow.push(C64::new(1.0, 0.0));
    for m in 1..2 * n - 1 {
        let prev = zpow[m - 1];
        zpow.push(prev * z);
    }
    let mut s = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            s += q[(j, k)] * zpow[n - 1 - j + k];
        }
    }
    let zn = zpow[n - 1] * z;
    zn - s * delta
}

/// The power matrix with entries z^(n-1-j+k); its HS norm is K(|z|^2), and
/// pairing it entrywise with Q gives the first-order correction term.
pub struct ZVector {
    pub n: usize,
    pub z: C64,
    pub entries: DenseMatrix,
}

impl ZVector {
    pub fn hs_norm(&self) -> f64 {
        self.entries.hs_norm()
    }
}

pub fn z_vector(z: C64, n: usize) -> ZVector {
    assert!(n >= 1);
    let mut zpow = Vec::with_capacity(2 * n - 1);
    zpow.push(C64::new(1.0, 0.0));
    for m in 1..2 * n - 1 {
        let prev = zpow[m - 1];
        zpow.push(prev * z);
    }
    let entries = DenseMatrix::from_fn(n, n, |j, k| zpow[n - 1 - j + k]);
    ZVector { n, z, entries }
}

/// Number of zeros of g(., Q) inside |z| = r, counted with multiplicity by
/// accumulating the phase of g around the circle. Segments whose phase step
/// reaches pi/2 are bisected, up to a fixed evaluation budget.
pub fn count_zeros_argument_principle(
    q: &DenseMatrix,
    delta: f64,
    r: f64,
    nodes: usize,
) -> Result<usize, GrushinError> {
    assert!(nodes >= CONTOUR_MIN_NODES, "need at least {CONTOUR_MIN_NODES} nodes");
    assert!(r > 0.0);
    let mut evals = 0usize;
    let mut min_mod = f64::INFINITY;
    let mut max_mod = 0.0f64;
    let eval = |t: f64, evals: &mut usize| -> Result<C64, GrushinError> {
        let z = C64::from_polar(r, 2.0 * PI * t);
        let g = effective_hamiltonian_exact(z, q, delta)?.value;
        *evals += 1;
        Ok(g)
    };

    let mut ring = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let g = eval(k as f64 / nodes as f64, &mut evals)?;
        min_mod = min_mod.min(g.norm());
        max_mod = max_mod.max(g.norm());
        ring.push(g);
    }
    if min_mod < CONTOUR_MODULUS_FLOOR * max_mod {
        return Err(GrushinError::ContourTooClose { min_modulus: min_mod, max_modulus: max_mod });
    }

    let mut total = 0.0f64;
    // Segments as (t_a, g_a, t_b, g_b); the wrap-around segment reuses the
    // t = 0 value since g is periodic.
    let mut stack: Vec<(f64, C64, f64, C64)> = (0..nodes)
        .rev()
        .map(|k| {
            let ta = k as f64 / nodes as f64;
            let tb = (k + 1) as f64 / nodes as f64;
            (ta, ring[k], tb, ring[(k + 1) % nodes])
        })
        .collect();
    while let Some((ta, ga, tb, gb)) = stack.pop() {
        let dphi = (gb / ga).arg();
        if dphi.abs() < PI / 2.0 {
            total += dphi;
            continue;
        }
        if evals >= CONTOUR_EVAL_BUDGET {
            return Err(GrushinError::NodeBudgetExceeded { evaluations: evals });
        }
        let tm = 0.5 * (ta + tb);
        let gm = eval(tm, &mut evals)?;
        min_mod = min_mod.min(gm.norm());
        max_mod = max_mod.max(gm.norm());
        if min_mod < CONTOUR_MODULUS_FLOOR * max_mod {
            return Err(GrushinError::ContourTooClose {
                min_modulus: min_mod,
                max_modulus: max_mod,
            });
        }
        stack.push((tm, gm, tb, gb));
        stack.push((ta, ga, tm, gm));
    }

    let winding = total / (2.0 * PI);
    let count = winding.round() as i64;
    assert!(
        (winding - count as f64).abs() < 0.25,
        "winding number {winding} is not close to an integer"
    );
    assert!(count >= 0, "negative winding {count} for a holomorphic function");
    Ok(count as usize)
}
