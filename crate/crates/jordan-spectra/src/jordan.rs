//! The model family: the nilpotent Jordan block A0, random perturbations
//! A_delta = A0 + delta Q, the exactly solvable rank-one case, and the
//! regime checks that tell downstream code which formulas are trustworthy.

use serde::{Deserialize, Serialize};

use crate::asymptotics::big_g;
use crate::linalg::rng::{RngState, sample_ginibre};
use crate::linalg::{C64, DenseMatrix};

/// Default constant for the HS-norm acceptance threshold |Q|_HS <= c1 n.
pub const DEFAULT_C1: f64 = 2.0;

/// The n x n Jordan block with eigenvalue 0: ones on the superdiagonal.
pub fn jordan_block(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    })
}

/// The corner matrix e_n e_1^T used by the exactly solvable perturbation.
pub fn rank_one_matrix(n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    m[(n - 1, 0)] = C64::new(1.0, 0.0);
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// Ginibre matrix: iid complex Gaussian entries with E|q_jk|^2 = 1.
    Gaussian,
    /// Deterministic corner perturbation e_n e_1^T, exactly solvable.
    RankOne,
}

/// Everything needed to reproduce one perturbed operator bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub n: usize,
    pub delta: f64,
    pub kind: PerturbationKind,
    pub master_seed: u64,
    pub trial_index: u64,
    /// Acceptance threshold constant; trials with |Q|_HS > c1 n are dropped.
    pub c1: f64,
}

impl PerturbationSpec {
    pub fn new(
        n: usize,
        delta: f64,
        kind: PerturbationKind,
        master_seed: u64,
        trial_index: u64,
    ) -> Self {
        PerturbationSpec { n, delta, kind, master_seed, trial_index, c1: DEFAULT_C1 }
    }
}

pub struct PerturbedOperator {
    pub spec: PerturbationSpec,
    pub q: DenseMatrix,
    pub a_delta: DenseMatrix,
    /// False when the draw landed outside the HS concentration event.
    pub accepted: bool,
}

impl PerturbedOperator {
    pub fn build(spec: &PerturbationSpec) -> Self {
        assert!(spec.n >= 2, "model needs dimension at least 2");
        assert!(spec.delta > 0.0, "perturbation strength must be positive");
        let q = match spec.kind {
            PerturbationKind::Gaussian => {
                let mut rng = RngState::new(spec.master_seed, spec.trial_index);
                sample_ginibre(spec.n, &mut rng)
            }
            PerturbationKind::RankOne => rank_one_matrix(spec.n),
        };
        let accepted = q.hs_norm() <= spec.c1 * spec.n as f64;
        let a_delta = jordan_block(spec.n).add(&q.scaled(C64::new(spec.delta, 0.0)));
        PerturbedOperator { spec: *spec, q, a_delta, accepted }
    }
}

/// Spectrum of A0 + delta e_n e_1^T in closed form: the characteristic
/// polynomial is z^n - delta, so the eigenvalues are delta^(1/n) times the
/// n-th roots of unity.
pub fn rank_one_oracle_eigenvalues(n: usize, delta: f64) -> Vec<C64> {
    assert!(n >= 1 && delta > 0.0);
    let radius = delta.powf(1.0 / n as f64);
    (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Which approximations are valid at radius r for the given strengths.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeReport {
    /// delta |Q| G(r), the contraction factor of the Neumann series.
    pub neumann_product: f64,
    /// Neumann series converges comfortably: neumann_product < 1/2.
    pub neumann_ok: bool,
    /// Density error bound r^(n-1) n (1-r)^2 / delta + delta n^3.
    pub error_term: f64,
    /// Interior density formulas apply: error_term < 0.1.
    pub theorem_ok: bool,
}

/// Regime flags from an explicit perturbation norm (HS norm of the actual
/// draw, when available).
pub fn regime_report(n: usize, delta: f64, q_norm: f64, r: f64) -> RegimeReport {
    let nf = n as f64;
    let neumann_product = delta * q_norm * big_g(n, r);
    let error_term = if r < 1.0 {
        r.powi(n as i32 - 1) * nf * (1.0 - r) * (1.0 - r) / delta + delta * nf * nf * nf
    } else {
        f64::INFINITY
    };
    RegimeReport {
        neumann_product,
        neumann_ok: neumann_product < 0.5,
        error_term,
        theorem_ok: error_term < 0.1,
    }
}

/// Regime flags using the nominal perturbation size for the kind: E|Q|_HS = n
/// for Gaussian draws, exactly 1 for the rank-one corner.
pub fn regime_flags(spec: &PerturbationSpec, r: f64) -> RegimeReport {
    let q_norm = match spec.kind {
        PerturbationKind::Gaussian => spec.n as f64,
        PerturbationKind::RankOne => 1.0,
    };
    regime_report(spec.n, spec.delta, q_norm, r)
}
