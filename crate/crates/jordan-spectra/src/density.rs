//! Interior eigenvalue density: the hyperbolic-volume limit profile, its
//! finite-dimension correction, radial histograms with Poisson error bars,
//! an angular uniformity test, and the annulus concentration check.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{big_k, curvature_combination};
use crate::jordan::{regime_flags, PerturbationSpec, PerturbedOperator};
use crate::linalg::eig::{eigenvalues, min_singular_estimate};
use crate::linalg::{C64, LinalgError};

/// 99.9% quantile of the chi-square distribution with 15 degrees of freedom.
pub const CHI2_99P9_DOF15: f64 = 37.69729821835383;

/// Number of angular sectors in the rotation uniformity test.
pub const UNIFORMITY_SECTORS: usize = 16;

/// Minimum number of interior eigenvalues for a meaningful chi-square test.
pub const UNIFORMITY_MIN_SAMPLES: usize = 100;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("samples disagree on (n, delta, kind); refusing to pool them")]
    MixedSpecs,
    #[error("too few interior eigenvalues for a sector test ({found} < {needed})")]
    InsufficientData { found: usize, needed: usize },
    #[error(
        "density theorem regime violated at r = {radius}: error term {error_term} >= 0.1"
    )]
    RegimeViolation { radius: f64, error_term: f64 },
}

/// Limiting interior density 2 / (pi (1 - r^2)^2), the hyperbolic volume
/// density of the unit disc. Per unit area, so the radial profile carries an
/// extra 2 pi r factor.
pub fn predicted_density(r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "density is defined on 0 <= r < 1");
    let s = 1.0 - r * r;
    2.0 / (PI * s * s)
}

/// Finite-dimension density at radius r: the curvature combination of the
/// partial geometric sum divided by pi K_n(r^2)^2. Converges to
/// `predicted_density` pointwise on the open disc as n grows.
pub fn predicted_density_finite_n(n: usize, r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "density is defined on 0 <= r < 1");
    let t = r * r;
    let k = big_k(n, t);
    curvature_combination(n, t) / (PI * k * k)
}

/// Expected number of eigenvalues in the disc D(0, r) under the limiting
/// density: the integral of `predicted_density` over the disc, 2r^2/(1-r^2).
pub fn expected_count_disk(r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "count formula needs 0 <= r < 1");
    2.0 * r * r / (1.0 - r * r)
}

/// One simulated spectrum with provenance and a residual spot check.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub spec: PerturbationSpec,
    pub eigenvalues: Vec<C64>,
    /// Largest smallest-singular-value estimate of A_delta - lambda among the
    /// spot-checked eigenvalues (smallest, median, and largest modulus).
    pub max_residual: f64,
    /// False when the perturbation draw fell outside the norm acceptance event.
    pub accepted: bool,
}

impl SpectrumSample {
    /// Build the operator for `spec`, compute its full spectrum, and verify a
    /// spot check of eigenvalue residuals.
    pub fn compute(spec: &PerturbationSpec) -> Result<SpectrumSample, LinalgError> {
        let op = PerturbedOperator::build(spec);
        let eigs = eigenvalues(&op.a_delta)?;

        let mut order: Vec<usize> = (0..eigs.len()).collect();
        order.sort_by(|&a, &b| eigs[a].norm().total_cmp(&eigs[b].norm()));
        let mut probes = vec![order[0], order[order.len() / 2], order[order.len() - 1]];
        probes.dedup();

        let mut max_residual: f64 = 0.0;
        for idx in probes {
            let mut shifted = op.a_delta.clone();
            for i in 0..spec.n {
                shifted[(i, i)] -= eigs[idx];
            }
            max_residual = max_residual.max(min_singular_estimate(&shifted));
        }

        Ok(SpectrumSample { spec: *spec, eigenvalues: eigs, max_residual, accepted: op.accepted })
    }
}

/// Radial histogram of eigenvalue moduli pooled over accepted trials, with
/// the per-trial prediction and its Poisson standard error for each bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialHistogram {
    /// Bin boundaries; bin i covers [edges[i], edges[i+1]).
    pub edges: Vec<f64>,
    /// Total eigenvalue count per bin over all accepted trials.
    pub counts: Vec<u64>,
    /// Number of accepted trials pooled.
    pub trials: usize,
    /// Expected count per bin for a single trial under the limiting density.
    pub predicted: Vec<f64>,
    /// Standard error of counts/trials per bin: sqrt(predicted / trials).
    pub poisson_err: Vec<f64>,
}

impl RadialHistogram {
    /// Serialize with a fixed header and shortest round-trip floats, one row
    /// per bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r_lo,r_hi,count,trials,predicted,poisson_err\n");
        for i in 0..self.counts.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.edges[i],
                self.edges[i + 1],
                self.counts[i],
                self.trials,
                self.predicted[i],
                self.poisson_err[i]
            )
            .expect("string writes cannot fail");
        }
        out
    }
}

fn validate_edges(edges: &[f64]) {
    assert!(edges.len() >= 2, "need at least one bin");
    assert!(edges[0] >= 0.0, "radial bins start at a nonnegative radius");
    assert!(
        edges.windows(2).all(|w| w[0] < w[1]),
        "bin edges must be strictly increasing"
    );
    assert!(*edges.last().unwrap() < 1.0, "bins must stay inside the unit disc");
}

/// Pool accepted samples into a radial histogram over the given bin edges.
///
/// All samples must share (n, delta, kind). The density theorem must apply
/// slightly beyond the last edge: the regime flags are evaluated at
/// r0 = edges.last() + 1/n and the run is rejected when the error term there
/// is out of regime. Zero samples produce an all-zero histogram.
pub fn empirical_profile(
    samples: &[SpectrumSample],
    edges: &[f64],
) -> Result<RadialHistogram, DensityError> {
    validate_edges(edges);
    let bins = edges.len() - 1;

    if let Some(first) = samples.first() {
        let base = first.spec;
        if samples.iter().any(|s| {
            s.spec.n != base.n || s.spec.delta != base.delta || s.spec.kind != base.kind
        }) {
            return Err(DensityError::MixedSpecs);
        }
        let r0 = edges.last().unwrap() + 1.0 / base.n as f64;
        let regime = regime_flags(&base, r0);
        if !regime.theorem_ok {
            return Err(DensityError::RegimeViolation {
                radius: r0,
                error_term: regime.error_term,
            });
        }
    }

    let mut counts = vec![0u64; bins];
    let mut trials = 0usize;
    for sample in samples.iter().filter(|s| s.accepted) {
        trials += 1;
        for lambda in &sample.eigenvalues {
            let r = lambda.norm();
            let idx = edges.partition_point(|&e| e <= r);
            if idx >= 1 && idx <= bins {
                counts[idx - 1] += 1;
            }
        }
    }

    let predicted: Vec<f64> = (0..bins)
        .map(|i| expected_count_disk(edges[i + 1]) - expected_count_disk(edges[i]))
        .collect();
    let poisson_err: Vec<f64> = predicted
        .iter()
        .map(|&p| if trials == 0 { 0.0 } else { (p / trials as f64).sqrt() })
        .collect();

    Ok(RadialHistogram { edges: edges.to_vec(), counts, trials, predicted, poisson_err })
}

/// Chi-square sector test of rotation invariance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UniformityReport {
    pub chi2: f64,
    pub dof: usize,
    /// True when chi2 is below the 99.9% quantile.
    pub pass: bool,
}

/// Test the angular distribution of interior eigenvalues (|lambda| < r_max,
/// accepted trials only) against the uniform law over 16 sectors.
pub fn rotation_uniformity(
    samples: &[SpectrumSample],
    r_max: f64,
) -> Result<UniformityReport, DensityError> {
    assert!(r_max > 0.0 && r_max < 1.0, "interior radius must lie in (0, 1)");
    let mut sector_counts = [0u64; UNIFORMITY_SECTORS];
    let mut total = 0usize;
    for sample in samples.iter().filter(|s| s.accepted) {
        for lambda in &sample.eigenvalues {
            if lambda.norm() < r_max {
                let angle = lambda.arg();
                let sector = (((angle + PI) / (2.0 * PI)) * UNIFORMITY_SECTORS as f64) as usize;
                sector_counts[sector.min(UNIFORMITY_SECTORS - 1)] += 1;
                total += 1;
            }
        }
    }
    if total < UNIFORMITY_MIN_SAMPLES {
        return Err(DensityError::InsufficientData {
            found: total,
            needed: UNIFORMITY_MIN_SAMPLES,
        });
    }
    let expected = total as f64 / UNIFORMITY_SECTORS as f64;
    let chi2 = sector_counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    Ok(UniformityReport { chi2, dof: UNIFORMITY_SECTORS - 1, pass: chi2 < CHI2_99P9_DOF15 })
}

/// Outcome of the high-probability annulus concentration check for one
/// spectrum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DhReport {
    /// All eigenvalues satisfy |lambda| <= outer_radius.
    pub contained: bool,
    /// Number of eigenvalues with |lambda| < inner_radius.
    pub inner_count: usize,
    /// Theoretical cap on inner_count: 2/sigma + (4/sigma) ln n.
    pub bound: f64,
    /// delta^(1/n) n^(3/n), inflated by 1e-6 for floating-point slack.
    pub outer_radius: f64,
    /// delta^(1/n) e^(-sigma).
    pub inner_radius: f64,
    /// True when delta <= n^-7, the literal hypothesis of the containment
    /// theorem. The check still runs outside that range.
    pub in_theorem_scope: bool,
}

/// Check one spectrum against the annulus concentration statement: outside
/// an event of small probability every eigenvalue lies in
/// |lambda| <= delta^(1/n) n^(3/n) and at most 2/sigma + (4/sigma) ln n of
/// them fall below delta^(1/n) e^(-sigma).
pub fn davies_hager_check(sample: &SpectrumSample, sigma: f64) -> DhReport {
    assert!(sigma > 0.0, "inner radius parameter must be positive");
    let n = sample.spec.n;
    let nf = n as f64;
    let radius = sample.spec.delta.powf(1.0 / nf);
    let outer_radius = radius * nf.powf(3.0 / nf) * (1.0 + 1e-6);
    let inner_radius = radius * (-sigma).exp();
    let mut contained = true;
    let mut inner_count = 0usize;
    for lambda in &sample.eigenvalues {
        let r = lambda.norm();
        if r > outer_radius {
            contained = false;
        }
        if r < inner_radius {
            inner_count += 1;
        }
    }
    DhReport {
        contained,
        inner_count,
        bound: 2.0 / sigma + (4.0 / sigma) * nf.ln(),
        outer_radius,
        inner_radius,
        in_theorem_scope: sample.spec.delta <= nf.powi(-7),
    }
}
