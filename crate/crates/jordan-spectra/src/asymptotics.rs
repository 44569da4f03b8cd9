//! Scalar special functions of the spectral density analysis: the kernel sum
//! K, the resolvent envelope G, the weighted power sums M_{N,k} and their
//! infinite-N closed forms, the curvature combination entering the density,
//! and bounded-ratio sweeps that pin the order-of-magnitude equivalences.

use serde::Serialize;

/// Switch from closed forms to direct summation this close to t = 1.
const NEAR_ONE: f64 = 1e-4;

/// K(t) = sum_{nu=0}^{n-1} t^nu, via (1 - t^n)/(1 - t) away from t = 1 and
/// direct summation near it to dodge the 0/0 cancellation.
pub fn big_k(n: usize, t: f64) -> f64 {
    assert!(n >= 1, "K needs at least one term");
    assert!((0.0..=1.0).contains(&t), "K evaluated for t in [0, 1]");
    if (1.0 - t).abs() > NEAR_ONE {
        (1.0 - t.powi(n as i32)) / (1.0 - t)
    } else {
        let mut acc = 0.0;
        let mut p = 1.0;
        for _ in 0..n {
            acc += p;
            p *= t;
        }
        acc
    }
}

/// G(r) = min(n, 1/(1-r)), the resolvent growth envelope. Values r >= 1 cap
/// at n, the same ceiling the minimum enforces as r -> 1.
pub fn big_g(n: usize, r: f64) -> f64 {
    assert!(n >= 1 && r >= 0.0);
    if r >= 1.0 {
        return n as f64;
    }
    (n as f64).min(1.0 / (1.0 - r))
}

/// M_{n,k}(t) = sum_{nu=1}^{n-1} nu^k t^nu, as the literal partial sum.
pub fn m_poly(n: usize, k: usize, t: f64) -> f64 {
    assert!(n >= 2, "partial sum starts at nu = 1");
    let mut acc = 0.0;
    for nu in 1..n {
        acc += (nu as f64).powi(k as i32) * t.powi(nu as i32);
    }
    acc
}

/// M_{infinity,k}(t) = sum_{nu>=1} nu^k t^nu in closed form, k <= 3.
pub fn m_infinity(k: usize, t: f64) -> f64 {
    assert!((0.0..1.0).contains(&t), "infinite sums need |t| < 1");
    match k {
        0 => t / (1.0 - t),
        1 => t / (1.0 - t).powi(2),
        2 => t * (1.0 + t) / (1.0 - t).powi(3),
        3 => t * (1.0 + 4.0 * t + t * t) / (1.0 - t).powi(4),
        _ => panic!("closed forms implemented for k <= 3, got {k}"),
    }
}

/// (t d/dt)^order applied to K_n, which is exactly the weighted power sum
/// m_poly(n, order, t) term by term.
pub fn k_differential(n: usize, order: usize, t: f64) -> f64 {
    assert!(order == 1 || order == 2, "orders 1 and 2 only");
    m_poly(n, order, t)
}

/// The curvature combination (2/t)(K (t d/dt)^2 K - ((t d/dt) K)^2), extended
/// continuously to t = 0 where the coefficient expansion gives the value 2.
/// Nonnegative for all n >= 2, 0 <= t < 1, since it equals the double sum of
/// (nu - mu)^2 t^(nu+mu-1) over 0 <= nu, mu < n.
pub fn curvature_combination(n: usize, t: f64) -> f64 {
    assert!(n >= 2);
    assert!((0.0..1.0).contains(&t));
    if t == 0.0 {
        return 2.0;
    }
    let k = big_k(n, t);
    let m1 = m_poly(n, 1, t);
    let m2 = m_poly(n, 2, t);
    (2.0 / t) * (k * m2 - m1 * m1)
}

/// |z dz Z|^2_HS at t = |z|^2: the combination 2(K (t d/dt)^2 K + ((t d/dt) K)^2).
pub fn dz_z_norm_sq(n: usize, t: f64) -> f64 {
    assert!(n >= 2);
    assert!((0.0..1.0).contains(&t));
    let k = big_k(n, t);
    let m1 = m_poly(n, 1, t);
    let m2 = m_poly(n, 2, t);
    2.0 * (k * m2 + m1 * m1)
}

/// Result of one bounded-ratio sweep: the extreme ratios of a quantity
/// against its claimed envelope over an explicit grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub quantity: String,
    pub grid: String,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// ratio_max / ratio_min; 1 means the claimed envelope is an identity.
    pub spread: f64,
}

impl EquivalenceReport {
    fn new(quantity: String, grid: String, ratio_min: f64, ratio_max: f64) -> Self {
        assert!(
            ratio_min > 0.0 && ratio_min.is_finite() && ratio_max >= ratio_min,
            "degenerate ratio range [{ratio_min}, {ratio_max}] for {quantity}"
        );
        let spread = ratio_max / ratio_min;
        EquivalenceReport { quantity, grid, ratio_min, ratio_max, spread }
    }
}

fn binomial(k: usize, j: usize) -> f64 {
    let mut acc = 1u64;
    for i in 0..j {
        acc = acc * (k - i) as u64 / (i + 1) as u64;
    }
    acc as f64
}

/// Shared evaluation grid: `points` equally spaced t values in [0.01, 0.999].
pub fn default_t_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let (a, b) = (0.01, 0.999);
    (0..points).map(|i| a + i as f64 * (b - a) / (points - 1) as f64).collect()
}

/// Standard exponents for the bounded-ratio sweeps.
pub const DEFAULT_K_LIST: [usize; 4] = [0, 1, 2, 3];
/// Standard dimensions for the bounded-ratio sweeps.
pub const DEFAULT_N_LIST: [usize; 3] = [10, 100, 1000];

/// Bounded-ratio verification of the equivalences: each claimed envelope is
/// divided into the exact quantity over the grid and the extreme ratios are
/// reported. n-dependent comparands clip the grid to t <= 1 - 1/n.
pub fn check_equivalences(
    k_list: &[usize],
    n_list: &[usize],
    t_grid: &[f64],
) -> Vec<EquivalenceReport> {
    assert!(!t_grid.is_empty());
    let lo = t_grid.first().unwrap();
    let hi = t_grid.last().unwrap();
    let grid_free = format!("{} points, t in [{lo:.3}, {hi:.3}]", t_grid.len());
    let grid_clipped = format!("{grid_free}, clipped to t <= 1 - 1/n for n in {n_list:?}");
    let clip = |n: usize, t: f64| t > 1.0 - 1.0 / (n as f64) + 1e-15;
    let mut out = Vec::new();

    // m_infinity(k) against the pole envelope t/(1-t)^(k+1); n-free.
    for &k in k_list {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &t in t_grid {
            let r = m_infinity(k, t) / (t / (1.0 - t).powi(k as i32 + 1));
            min = min.min(r);
            max = max.max(r);
        }
        out.push(EquivalenceReport::new(
            format!("m_infinity_vs_pole k={k}"),
            grid_free.clone(),
            min,
            max,
        ));
    }

    // The tail sum_{nu>=n} nu^k t^nu against t^n/(1-t) (n + 1/(1-t))^k, with
    // the common factor t^n cancelled algebraically on both sides so the
    // comparison stays finite where t^n underflows.
    for &k in k_list {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &n in n_list {
            for &t in t_grid {
                if clip(n, t) {
                    continue;
                }
                let s = [1.0 / (1.0 - t), m_infinity(1, t), m_infinity(2, t), m_infinity(3, t)];
                let mut num = 0.0;
                for (j, &sj) in s.iter().enumerate().take(k + 1) {
                    num += binomial(k, j) * (n as f64).powi((k - j) as i32) * sj;
                }
                let den = (1.0 / (1.0 - t)) * (n as f64 + 1.0 / (1.0 - t)).powi(k as i32);
                let r = num / den;
                min = min.min(r);
                max = max.max(r);
            }
        }
        out.push(EquivalenceReport::new(
            format!("tail_vs_mixed_envelope k={k}"),
            grid_clipped.clone(),
            min,
            max,
        ));
    }

    // m_poly(n, k) against t min(1/(1-t), n)^(k+1).
    for &k in k_list {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &n in n_list {
            for &t in t_grid {
                if clip(n, t) {
                    continue;
                }
                let env = t * (1.0 / (1.0 - t)).min(n as f64).powi(k as i32 + 1);
                let r = m_poly(n, k, t) / env;
                min = min.min(r);
                max = max.max(r);
            }
        }
        out.push(EquivalenceReport::new(
            format!("m_poly_vs_min_envelope k={k}"),
            grid_clipped.clone(),
            min,
            max,
        ));
    }

    // Curvature combination against K^4.
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &n in n_list {
        for &t in t_grid {
            if clip(n, t) {
                continue;
            }
            let r = curvature_combination(n, t) / big_k(n, t).powi(4);
            min = min.min(r);
            max = max.max(r);
        }
    }
    out.push(EquivalenceReport::new(
        "curvature_vs_k4".to_string(),
        grid_clipped,
        min,
        max,
    ));
    out
}

/// Fitted constant of the density bridge: the worst ratio of
/// |curvature/(pi K^2) - 2/(pi (1-t)^2)| to the envelope t^(n-1) n^2.
/// Points where the envelope sits below the f64 resolution of the difference
/// (10^-12 of the limiting density) are excluded; there the true difference
/// is unrepresentable and the ratio would only measure rounding noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeFit {
    pub c_fit: f64,
    pub points_used: usize,
    pub grid: String,
}

/// Reference value of the bridge constant, fitted once on the default grids
/// with an independent double-precision implementation.
pub const BRIDGE_C_BASELINE: f64 = 1.592309456720676;

pub fn density_bridge_fit(n_list: &[usize], t_grid: &[f64]) -> BridgeFit {
    use std::f64::consts::PI;
    let mut c_fit = 0.0f64;
    let mut points_used = 0usize;
    for &n in n_list {
        for &t in t_grid {
            if t > 1.0 - 1.0 / (n as f64) + 1e-15 {
                continue;
            }
            let env = t.powi(n as i32 - 1) * n as f64 * n as f64;
            let lim = 2.0 / (PI * (1.0 - t).powi(2));
            if env < 1e-12 * lim {
                continue;
            }
            points_used += 1;
            let fin = curvature_combination(n, t) / (PI * big_k(n, t).powi(2));
            c_fit = c_fit.max((fin - lim).abs() / env);
        }
    }
    let lo = t_grid.first().unwrap();
    let hi = t_grid.last().unwrap();
    BridgeFit {
        c_fit,
        points_used,
        grid: format!(
            "{} points, t in [{lo:.3}, {hi:.3}], n in {n_list:?}, envelope-resolvable only",
            t_grid.len()
        ),
    }
}
