//! End-to-end acceptance suite. Each test prints one verdict line of the
//! form `ACCEPTANCE k (name): PASS` (run with `-- --nocapture` to see the
//! lines on success) and fails the build when its criterion is not met.

use std::path::PathBuf;

use jordan_spectra::asymptotics::{
    big_k, check_equivalences, curvature_combination, default_t_grid, density_bridge_fit,
    DEFAULT_K_LIST, DEFAULT_N_LIST,
};
use jordan_spectra::density::{
    davies_hager_check, empirical_profile, rotation_uniformity, SpectrumSample,
};
use jordan_spectra::experiment::{
    resolve_config, run_figures, run_grushin_check, Command, Overrides,
};
use jordan_spectra::grushin::{
    effective_hamiltonian_exact, first_order_approx, z_vector,
};
use jordan_spectra::jordan::{
    rank_one_oracle_eigenvalues, PerturbationKind, PerturbationSpec, PerturbedOperator,
};
use jordan_spectra::linalg::eig::{eigenvalues, multiset_max_distance};
use jordan_spectra::linalg::rng::{sample_ginibre, verify_hs_concentration, RngState};
use jordan_spectra::C64;

fn conclude(number: usize, name: &str, failures: Vec<String>) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number} ({name}): {verdict}");
    for failure in &failures {
        println!("  - {failure}");
    }
    assert!(
        failures.is_empty(),
        "acceptance criterion {number} ({name}): {} check(s) failed",
        failures.len()
    );
}

fn temp_out(tag: &str) -> PathBuf {
    let dir =
        std::env::temp_dir().join(format!("jordan-spectra-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

/// Closed-form spectrum of the rank-one corner perturbation, matched by the
/// QR solver across sizes and couplings.
#[test]
fn criterion_1_rank_one_oracle() {
    let mut failures = Vec::new();
    for n in [4usize, 16, 64] {
        for delta in [1e-2, 1e-4] {
            let spec = PerturbationSpec::new(n, delta, PerturbationKind::RankOne, 1, 0);
            let op = PerturbedOperator::build(&spec);
            let computed = eigenvalues(&op.a_delta).expect("QR converges");
            let oracle = rank_one_oracle_eigenvalues(n, delta);
            let distance = multiset_max_distance(&computed, &oracle);
            if distance > 1e-8 {
                failures.push(format!("n={n} delta={delta}: multiset error {distance:.3e}"));
            }
        }
    }
    conclude(1, "rank-one oracle", failures);
}

/// Bordered-operator exactness at n=50, delta=1e-6: inverse identity,
/// vanishing of the effective scalar at every QR eigenvalue, Neumann
/// agreement, and winding counts equal to QR counts on 20 trials.
#[test]
fn criterion_2_grushin_exactness() {
    let mut failures = Vec::new();
    let n = 50usize;
    let delta = 1e-6;

    let mut config = resolve_config(
        Command::GrushinCheck,
        Overrides::default(),
        Overrides { n: Some(n), delta: Some(delta), ..Default::default() },
        None,
    )
    .unwrap();
    config.out_dir = temp_out("grushin");
    let report = run_grushin_check(&config).expect("suite runs");
    for invariant in &report.invariants {
        if !invariant.pass {
            failures.push(format!(
                "invariant {} worst case {:.3e} above {:.1e}",
                invariant.name, invariant.worst, invariant.tolerance
            ));
        }
    }
    if report.contour_vs_qr.mismatches != 0 || report.contour_vs_qr.skipped > 10 {
        failures.push(format!(
            "contour counts: {} mismatches, {} skipped of {}",
            report.contour_vs_qr.mismatches,
            report.contour_vs_qr.skipped,
            report.contour_vs_qr.trials
        ));
    }
    let _ = std::fs::remove_dir_all(&config.out_dir);

    // The effective scalar vanishes at every interior eigenvalue up to a
    // backward-error-sized residual.
    for trial in 0..20u64 {
        let spec = PerturbationSpec::new(n, delta, PerturbationKind::Gaussian, 1, trial);
        let op = PerturbedOperator::build(&spec);
        let eigs = eigenvalues(&op.a_delta).expect("QR converges");
        let tol = 1e-8 * (1.0 + op.a_delta.hs_norm());
        for lambda in eigs.iter().filter(|l| l.norm() < 0.999) {
            let value = effective_hamiltonian_exact(*lambda, &op.q, delta)
                .expect("bordered solve")
                .value;
            if value.norm() > tol {
                failures.push(format!(
                    "trial {trial}: |E(lambda)| = {:.3e} above {tol:.3e} at |lambda| = {:.3}",
                    value.norm(),
                    lambda.norm()
                ));
            }
        }
    }
    conclude(2, "bordered-operator exactness", failures);
}

/// The first-order defect scales like (delta |Q| G)^2 with a constant that is
/// stable in n: max sampled ratios at matched coupling stay within a factor
/// of 10 of each other across n in {25, 50, 100}.
#[test]
fn criterion_3_first_order_residual() {
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for n in [25usize, 50, 100] {
        let mut rng = RngState::new(7, n as u64);
        let q = sample_ginibre(n, &mut rng);
        let op_norm = q.operator_norm_estimate(40);
        // |z| = 0.5 gives G = 2; pick delta so delta |Q| G = 0.1.
        let g = 2.0;
        let delta = 0.1 / (g * op_norm);
        let envelope = (delta * op_norm * g) * (delta * op_norm * g);
        let mut worst = 0.0f64;
        for angle in [0.4, 1.3, 2.2, 3.1, 4.0, 4.9] {
            let z = C64::from_polar(0.5, angle);
            let exact = effective_hamiltonian_exact(z, &q, delta).expect("solve").value;
            let first = first_order_approx(z, &q, delta);
            worst = worst.max((exact - first).norm() / envelope);
        }
        ratios.push((n, worst));
    }
    let max = ratios.iter().map(|(_, r)| *r).fold(f64::MIN, f64::max);
    let min = ratios.iter().map(|(_, r)| *r).fold(f64::MAX, f64::min);
    let spread = max / min;
    if spread.is_nan() || spread > 10.0 {
        failures.push(format!("ratio spread {spread:.3} outside factor 10: {ratios:?}"));
    }
    conclude(3, "first-order residual scaling", failures);
}

/// Headline Monte Carlo reproduction at n=100, delta=1e-8, 2000 trials:
/// mean interior count within 10%, per-bin Poisson agreement at 4 sigma,
/// angular chi-square at the 99.9% level, and split-half consistency.
#[test]
fn criterion_4_headline_density() {
    let mut failures = Vec::new();
    let n = 100usize;
    let delta = 1e-8;
    let trials = 2000u64;
    let r_max = 0.6;

    let samples: Vec<SpectrumSample> = (0..trials)
        .map(|trial| {
            let spec = PerturbationSpec::new(n, delta, PerturbationKind::Gaussian, 1, trial);
            SpectrumSample::compute(&spec).expect("QR converges")
        })
        .collect();

    let edges: Vec<f64> = (0..=12).map(|i| r_max * i as f64 / 12.0).collect();
    let histogram = empirical_profile(&samples, &edges).expect("in regime");

    let total: u64 = histogram.counts.iter().sum();
    let mean = total as f64 / histogram.trials as f64;
    let expected = 2.0 * r_max * r_max / (1.0 - r_max * r_max);
    if (mean - expected).abs() > 0.1 * expected {
        failures.push(format!("mean count {mean:.4} not within 10% of {expected}"));
    }

    for i in 0..histogram.counts.len() {
        if histogram.predicted[i] * (histogram.trials as f64) < 25.0 {
            continue;
        }
        let observed = histogram.counts[i] as f64 / histogram.trials as f64;
        let deviation = (observed - histogram.predicted[i]).abs();
        if deviation > 4.0 * histogram.poisson_err[i] {
            failures.push(format!(
                "bin [{:.2}, {:.2}): observed {observed:.4} vs predicted {:.4}, {:.1} sigma",
                histogram.edges[i],
                histogram.edges[i + 1],
                histogram.predicted[i],
                deviation / histogram.poisson_err[i]
            ));
        }
    }

    match rotation_uniformity(&samples, r_max) {
        Ok(report) => {
            if !report.pass {
                failures.push(format!("angular chi2 {:.2} above the 99.9% cutoff", report.chi2));
            }
        }
        Err(err) => failures.push(format!("chi-square test unavailable: {err}")),
    }

    // Two independent halves of the ensemble must agree bin by bin within
    // 4 standard errors of their difference.
    let (first, second) = samples.split_at(samples.len() / 2);
    let half_a = empirical_profile(first, &edges).expect("in regime");
    let half_b = empirical_profile(second, &edges).expect("in regime");
    for i in 0..half_a.counts.len() {
        if half_a.predicted[i] * (half_a.trials as f64) < 25.0 {
            continue;
        }
        let mean_a = half_a.counts[i] as f64 / half_a.trials as f64;
        let mean_b = half_b.counts[i] as f64 / half_b.trials as f64;
        let sigma = (half_a.predicted[i] / half_a.trials as f64
            + half_b.predicted[i] / half_b.trials as f64)
            .sqrt();
        if (mean_a - mean_b).abs() > 4.0 * sigma {
            failures.push(format!(
                "split-half bin [{:.2}, {:.2}): means {mean_a:.4} vs {mean_b:.4} differ by {:.1} sigma",
                edges[i],
                edges[i + 1],
                (mean_a - mean_b).abs() / sigma
            ));
        }
    }

    conclude(4, "headline interior density", failures);
}

/// Annulus concentration at n=500, delta=1e-5 over 50 trials: containment
/// and the inner-count bound hold at sigma in {0.5, 1} in at least 95% of
/// trials.
#[test]
fn criterion_5_annulus_concentration() {
    let mut failures = Vec::new();
    let trials = 50u64;
    let mut violations = [0usize; 2];
    for trial in 0..trials {
        let spec = PerturbationSpec::new(500, 1e-5, PerturbationKind::Gaussian, 1, trial);
        let sample = SpectrumSample::compute(&spec).expect("QR converges");
        for (slot, sigma) in [0.5, 1.0].into_iter().enumerate() {
            let report = davies_hager_check(&sample, sigma);
            if !report.contained || report.inner_count as f64 > report.bound {
                violations[slot] += 1;
            }
        }
    }
    for (slot, sigma) in [0.5, 1.0].into_iter().enumerate() {
        if violations[slot] as f64 > 0.05 * trials as f64 {
            failures.push(format!(
                "sigma={sigma}: {} violations in {trials} trials",
                violations[slot]
            ));
        }
    }
    conclude(5, "annulus concentration", failures);
}

/// Scatter reproduction: all four coupling files are produced at n=500 and
/// each keeps at least 89% of its eigenvalues inside the concentration
/// annulus at sigma = 0.5.
#[test]
fn criterion_6_figure_scatters() {
    let mut failures = Vec::new();
    let mut config = resolve_config(
        Command::Figures,
        Overrides::default(),
        Overrides::default(),
        None,
    )
    .unwrap();
    config.out_dir = temp_out("figures");
    let report = run_figures(&config).expect("figures run");
    if report.figures.len() != 4 {
        failures.push(format!("expected 4 scatter files, found {}", report.figures.len()));
    }
    for figure in &report.figures {
        let path = config.out_dir.join(&figure.file);
        let text = std::fs::read_to_string(&path).expect("scatter file exists");
        let rows = text.lines().count();
        if rows != 501 {
            failures.push(format!("{}: {} lines, expected 501", figure.file, rows));
        }
        if figure.annulus_fraction < 0.89 {
            failures.push(format!(
                "{}: annulus fraction {:.4} below 0.89",
                figure.file, figure.annulus_fraction
            ));
        }
    }
    let _ = std::fs::remove_dir_all(&config.out_dir);
    conclude(6, "figure scatter concentration", failures);
}

/// Asymptotics sweep: exact identities at 1e-12 relative accuracy, all
/// equivalence spreads finite and below 100, bitwise run-to-run
/// reproducibility, and a bridge constant stable to a factor 2 across grids.
#[test]
fn criterion_7_asymptotics_suite() {
    let mut failures = Vec::new();

    // Exact identities of the partial-sum calculus.
    for n in [10usize, 100] {
        for t in [0.05f64, 0.37, 0.81, 0.98] {
            let direct: f64 = (0..n).map(|nu| t.powi(nu as i32)).sum();
            let fast = big_k(n, t);
            if (fast - direct).abs() > 1e-12 * direct {
                failures.push(format!("K({n}, {t}) = {fast} vs direct sum {direct}"));
            }
        }
    }
    for t in [0.0, 0.3, 0.7, 0.95] {
        let value = curvature_combination(2, t);
        if (value - 2.0).abs() > 1e-12 * 2.0 {
            failures.push(format!("curvature at n=2, t={t} is {value}, expected exactly 2"));
        }
    }
    for n in [6usize, 30] {
        for &z in &[C64::new(0.4, 0.3), C64::from_polar(0.85, 2.0)] {
            let t = z.norm_sqr();
            let hs = z_vector(z, n).hs_norm();
            let k = big_k(n, t);
            if (hs - k).abs() > 1e-12 * k {
                failures.push(format!("|Z|_HS = {hs} vs K({n}, {t}) = {k}"));
            }
        }
    }

    // Equivalence sweep: finite spreads under 100, exact geometric identities
    // at k <= 1, and bitwise reproducibility across calls.
    let grid = default_t_grid(200);
    let reports = check_equivalences(&DEFAULT_K_LIST, &DEFAULT_N_LIST, &grid);
    for report in &reports {
        if !report.spread.is_finite() || report.spread >= 100.0 {
            failures.push(format!("{}: spread {}", report.quantity, report.spread));
        }
    }
    if reports[0].spread != 1.0 || reports[1].spread != 1.0 {
        failures.push(format!(
            "pole envelopes at k=0,1 must be exact: spreads {} and {}",
            reports[0].spread, reports[1].spread
        ));
    }
    let rerun = check_equivalences(&DEFAULT_K_LIST, &DEFAULT_N_LIST, &grid);
    if rerun != reports {
        failures.push("equivalence sweep is not bitwise reproducible".into());
    }

    // Bridge constant: reproducible and grid-stable.
    let primary = density_bridge_fit(&DEFAULT_N_LIST, &grid);
    let again = density_bridge_fit(&DEFAULT_N_LIST, &grid);
    if primary != again {
        failures.push("bridge fit is not bitwise reproducible".into());
    }
    let secondary = density_bridge_fit(&DEFAULT_N_LIST, &default_t_grid(317));
    let ratio = primary.c_fit / secondary.c_fit;
    if !(0.5..=2.0).contains(&ratio) {
        failures.push(format!(
            "bridge constants {} and {} differ by more than a factor 2",
            primary.c_fit, secondary.c_fit
        ));
    }

    conclude(7, "asymptotics suite", failures);
}

/// Norm concentration of the Gaussian ensemble: no draw among 1000 at n=50
/// exceeds |Q|_HS^2 = 4 n^2.
#[test]
fn criterion_8_tail_bound() {
    let mut failures = Vec::new();
    let mut rng = RngState::new(1, 7777);
    let report = verify_hs_concentration(50, 1000, 2.0, &mut rng);
    if report.violations != 0 {
        failures.push(format!("{} of {} draws violated the bound", report.violations, report.trials));
    }
    conclude(8, "norm tail bound", failures);
}
