//! Deterministic, splittable random sampling for Monte Carlo trials.
//!
//! Every trial draws from its own stream, derived from (master_seed,
//! stream_index) through an avalanche mixer, so results do not depend on
//! execution order or thread count. The generator is splitmix64; complex
//! Gaussians come from Box-Muller with the convention that re and im are
//! independent real Gaussians of variance 1/2, so E|q|^2 = 1 and |q|^2 is
//! Exp(1)-distributed.

use super::{C64, DenseMatrix};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer; full-avalanche 64-bit mixer.
fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// One independent sample stream. Identical (master_seed, stream_index)
/// always produces the identical sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    master_seed: u64,
    stream_index: u64,
    state: u64,
}

impl RngState {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        // stream_index + 1 so that stream 0 does not collapse to mixing the
        // bare master seed with zero.
        let state = mix64(mix64(master_seed) ^ stream_index.wrapping_add(1).wrapping_mul(GOLDEN));
        RngState { master_seed, stream_index, state }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in (0, 1]; never returns 0 so that ln is safe.
    fn unit_open_closed(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Uniform in [0, 1).
    fn unit_closed_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64) * (1.0 / 9007199254740992.0)
    }
}

/// One standard complex Gaussian: E q = 0, E|q|^2 = 1.
pub fn sample_complex_gaussian(rng: &mut RngState) -> C64 {
    let u1 = rng.unit_open_closed();
    let u2 = rng.unit_closed_open();
    let r = (-u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    C64::from_polar(r, theta)
}

/// n x n matrix with i.i.d. standard complex Gaussian entries.
pub fn sample_ginibre(n: usize, rng: &mut RngState) -> DenseMatrix {
    assert!(n >= 1, "ginibre dimension must be at least 1");
    DenseMatrix::from_fn(n, n, |_, _| sample_complex_gaussian(rng))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationReport {
    pub trials: u64,
    pub violations: u64,
    pub fraction: f64,
}

/// Counts draws whose squared HS norm exceeds c1^2 n^2. With E|q|^2 = 1 the
/// squared norm is a sum of n^2 unit-mean Exp(1) variables, so for c1 >= 2
/// violations are astronomically rare.
pub fn verify_hs_concentration(
    n: usize,
    trials: u64,
    c1: f64,
    rng: &mut RngState,
) -> ConcentrationReport {
    let threshold = c1 * c1 * (n * n) as f64;
    let mut violations = 0u64;
    for _ in 0..trials {
        let q = sample_ginibre(n, rng);
        let sq = q.hs_norm().powi(2);
        if sq > threshold {
            violations += 1;
        }
    }
    let fraction = if trials == 0 { 0.0 } else { violations as f64 / trials as f64 };
    ConcentrationReport { trials, violations, fraction }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_state_identical_sequence() {
        let mut a = RngState::new(1234, 7);
        let mut b = RngState::new(1234, 7);
        for _ in 0..100 {
            assert_eq!(sample_complex_gaussian(&mut a), sample_complex_gaussian(&mut b));
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngState::new(1234, 0);
        let mut b = RngState::new(1234, 1);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xa, xb);
    }

    #[test]
    fn modulus_squared_has_unit_mean() {
        // |q|^2 ~ Exp(1): mean 1, variance 1. 1e5 samples, 3 sigma band.
        let mut rng = RngState::new(99, 0);
        let m = 100_000;
        let mean = (0..m)
            .map(|_| sample_complex_gaussian(&mut rng).norm_sqr())
            .sum::<f64>()
            / m as f64;
        let band = 3.0 * (1.0 / m as f64).sqrt();
        assert!((mean - 1.0).abs() < band, "mean {mean}, band {band}");
    }

    #[test]
    fn sample_mean_is_centered() {
        // Each component has variance 1/2; 5 sigma band on the sample mean.
        let mut rng = RngState::new(7, 3);
        let m = 100_000;
        let sum: C64 = (0..m).map(|_| sample_complex_gaussian(&mut rng)).sum();
        let mean = sum / m as f64;
        let band = 5.0 * (0.5 / m as f64).sqrt();
        assert!(mean.re.abs() < band && mean.im.abs() < band, "mean {mean}, band {band}");
    }

    #[test]
    fn ginibre_single_entry() {
        let mut rng = RngState::new(5, 0);
        let q = sample_ginibre(1, &mut rng);
        let mut rng2 = RngState::new(5, 0);
        assert_eq!(q[(0, 0)], sample_complex_gaussian(&mut rng2));
    }

    #[test]
    fn ginibre_hs_norm_scale() {
        // E ||Q||_HS^2 = n^2; across 1000 draws at n=50 the sample mean sits
        // well within 5% of 2500 (sd of the mean is 2500/sqrt(2500*1000)).
        let mut rng = RngState::new(2024, 0);
        let draws = 1000;
        let mean = (0..draws)
            .map(|_| sample_ginibre(50, &mut rng).hs_norm().powi(2))
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 2500.0).abs() < 125.0, "mean {mean}");
    }

    #[test]
    fn concentration_no_violations_at_c1_2() {
        let mut rng = RngState::new(31, 0);
        let rep = verify_hs_concentration(50, 1000, 2.0, &mut rng);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.trials, 1000);
    }

    #[test]
    fn concentration_empty() {
        let mut rng = RngState::new(31, 0);
        let rep = verify_hs_concentration(1, 0, 2.0, &mut rng);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.trials, 0);
        assert_eq!(rep.fraction, 0.0);
    }

    #[test]
    fn concentration_threshold_below_mean_violates() {
        // c1 = 0.5 puts the threshold at a quarter of the mean.
        let mut rng = RngState::new(31, 1);
        let rep = verify_hs_concentration(20, 200, 0.5, &mut rng);
        assert!(rep.fraction > 0.9, "fraction {}", rep.fraction);
    }
}
