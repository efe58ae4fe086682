use std::f64::consts::PI;

use spectrum_split::*;

fn il(alpha: f64, util: f64) -> NetworkParams {
    NetworkParams::interference_limited(alpha, 10.0, util).unwrap()
}

fn cfg(trials: u64, seed: u64) -> SimConfig {
    SimConfig { trials, ..SimConfig::with_seed(seed) }
}

/// Composite Simpson on `2/sqrt(pi) * exp(-t^2)`.
fn erf(x: f64) -> f64 {
    let steps = 4000;
    let h = x / steps as f64;
    let f = |t: f64| (-t * t).exp();
    let mut sum = f(0.0) + f(x);
    for i in 1..steps {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0 * 2.0 / PI.sqrt()
}

#[test]
fn quadrature_erf_is_accurate() {
    // erf(1) and erf(0.5) to 15 digits
    assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-12);
    assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-12);
}

/// Outage of a path-loss-only field at alpha = 4 on the infinite plane:
/// the interference is Levy distributed.
fn levy_outage(per_band: f64, d: f64, beta: f64) -> f64 {
    erf(per_band * PI.powf(1.5) * d * d * beta.sqrt() / 2.0)
}

fn within(p: f64, est: &OutageEstimate, sigmas: f64, bias: f64) -> bool {
    (est.p_out - p).abs() <= sigmas * est.stderr + bias
}

#[test]
fn path_loss_outage_matches_levy_law() {
    let p = il(4.0, 0.25);
    for n in [1u32, 4, 9] {
        let plan = sinr_threshold(&p, n).unwrap();
        for target in [0.02, 0.1, 0.3] {
            // invert the oracle for the per-band intensity giving `target`
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if levy_outage(mid, 10.0, plan.beta) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let per_band = 0.5 * (lo + hi);
            let est = estimate_outage(&p, &plan, per_band * f64::from(n), FadingModel::PathLossOnly, &cfg(100_000, 7))
                .unwrap();
            // the finite window removes a sliver of far interference
            assert!(within(target, &est, 4.0, 0.002), "n {n} target {target}: {}", est.p_out);
        }
    }
}

#[test]
fn rayleigh_outage_matches_closed_form() {
    for (alpha, util) in [(4.0, 0.25), (3.0, 0.5)] {
        let p = il(alpha, util);
        let gamma_product = |a: f64| {
            // Gamma(1 + 2/a) Gamma(1 - 2/a) = (2 pi / a) / sin(2 pi / a)
            let x = 2.0 * PI / a;
            x / x.sin()
        };
        if alpha == 4.0 {
            assert!((gamma_product(4.0) - PI / 2.0).abs() < 1e-15);
        }
        for n in [1u32, 5] {
            let plan = sinr_threshold(&p, n).unwrap();
            let per_band = 0.05 / (PI * 100.0 * plan.beta.powf(2.0 / alpha) * gamma_product(alpha));
            let expect = 1.0 - (-per_band * PI * 100.0 * plan.beta.powf(2.0 / alpha) * gamma_product(alpha)).exp();
            let est =
                estimate_outage(&p, &plan, per_band * f64::from(n), FadingModel::Rayleigh, &cfg(100_000, 3)).unwrap();
            let bias = if alpha == 3.0 { 0.004 } else { 0.001 };
            assert!(within(expect, &est, 4.0, bias), "alpha {alpha} n {n}: {} vs {expect}", est.p_out);
        }
    }
}

#[test]
fn rayleigh_with_noise() {
    let p = il(4.0, 0.25).with_snr(Snr::from_db(10.0).unwrap()).unwrap();
    let plan = sinr_threshold(&p, 4).unwrap();
    let noise_term = (-plan.beta * p.band_noise(4) / p.rx_power()).exp();
    let per_band = 1e-4;
    let field_term = (-per_band * PI * 100.0 * plan.beta.sqrt() * PI / 2.0).exp();
    let expect = 1.0 - noise_term * field_term;
    let est = estimate_outage(&p, &plan, per_band * 4.0, FadingModel::Rayleigh, &cfg(100_000, 11)).unwrap();
    assert!(within(expect, &est, 4.0, 0.001), "{} vs {expect}", est.p_out);
}

#[test]
fn coupled_outage_is_monotone_in_density() {
    let p = il(3.0, 0.25);
    let plan = sinr_threshold(&p, 3).unwrap();
    for fading in [FadingModel::PathLossOnly, FadingModel::Rayleigh] {
        let mut prev = -1.0;
        for k in 0..11 {
            let lambda = 1e-5 * 2f64.powi(k);
            let est = estimate_outage(&p, &plan, lambda, fading, &cfg(5_000, 5)).unwrap();
            assert!(est.p_out >= prev, "{fading:?} at {lambda}");
            prev = est.p_out;
        }
        assert!(prev > 0.5);
    }
}

#[test]
fn doubling_the_window_changes_little() {
    let p = il(4.0, 0.25);
    let plan = sinr_threshold(&p, 9).unwrap();
    let lambda = capacity_interference_limited(&p, 9, 0.1).unwrap().lambda;
    let base = SimConfig { trials: 100_000, ..Default::default() };
    let r = base.window_radius_for(&p, plan.beta);
    let near = estimate_outage(&p, &plan, lambda, FadingModel::PathLossOnly, &base).unwrap();
    let far_cfg = SimConfig { window_radius: Some(2.0 * r), ..base };
    let far = estimate_outage(&p, &plan, lambda, FadingModel::PathLossOnly, &far_cfg).unwrap();
    let diff = (far.p_out - near.p_out).abs();
    assert!(diff <= 0.005 + 4.0 * near.stderr.hypot(far.stderr), "{} vs {}", near.p_out, far.p_out);
}

#[test]
fn results_ignore_thread_count() {
    let p = il(4.0, 0.25);
    let plan = sinr_threshold(&p, 6).unwrap();
    let outage: Vec<_> = [1, 2, 5]
        .iter()
        .map(|&threads| {
            let c = SimConfig { threads, ..cfg(30_000, 99) };
            estimate_outage(&p, &plan, 1e-3, FadingModel::Rayleigh, &c).unwrap()
        })
        .collect();
    assert!(outage.windows(2).all(|w| w[0] == w[1]));
    let solved: Vec<_> = [1, 3]
        .iter()
        .map(|&threads| {
            let c = SimConfig { threads, ..cfg(20_000, 99) };
            solve_capacity(&p, 6, 0.1, FadingModel::PathLossOnly, &c).unwrap()
        })
        .collect();
    assert_eq!(solved[0], solved[1]);
}

#[test]
fn snapshots_replay_and_differ_across_trials() {
    let p = il(4.0, 0.25);
    let plan = sinr_threshold(&p, 4).unwrap();
    let c = cfg(1, 17);
    let a = sample_snapshot(&p, &plan, 1e-3, FadingModel::Rayleigh, &c, 12).unwrap();
    let b = sample_snapshot(&p, &plan, 1e-3, FadingModel::Rayleigh, &c, 12).unwrap();
    let other = sample_snapshot(&p, &plan, 1e-3, FadingModel::Rayleigh, &c, 13).unwrap();
    assert_eq!(a.sinr.to_bits(), b.sinr.to_bits());
    assert_eq!(a.n_interferers, b.n_interferers);
    assert_ne!(a.interference, other.interference);
}

#[test]
fn interferer_counts_are_poisson_thinned() {
    // A total density split over n bands leaves lambda / n on each band.
    let p = il(4.0, 0.25);
    let total = 2e-3;
    let c = cfg(1, 23);
    for n in [1u32, 4, 10] {
        let plan = sinr_threshold(&p, n).unwrap();
        let r = c.window_radius_for(&p, plan.beta);
        let mean_expect = total / f64::from(n) * PI * r * r;
        let samples = 4000;
        let counts: Vec<f64> = (0..samples)
            .map(|t| sample_snapshot(&p, &plan, total / f64::from(n), FadingModel::PathLossOnly, &c, t).unwrap())
            .map(|s| s.n_interferers as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / samples as f64;
        let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let se = (mean_expect / samples as f64).sqrt();
        assert!((mean - mean_expect).abs() < 5.0 * se, "n {n}: mean {mean} vs {mean_expect}");
        assert!((var / mean_expect - 1.0).abs() < 0.15, "n {n}: var {var} vs {mean_expect}");
    }
}

#[test]
fn solved_density_tracks_analytic_at_small_epsilon() {
    let p = il(4.0, 0.25);
    let n = optimal_band_count(&p).unwrap().n_star;
    for (eps, band) in [(0.02, 0.10), (0.05, 0.10), (0.1, 0.15)] {
        let mc = solve_capacity(&p, n, eps, FadingModel::PathLossOnly, &cfg(100_000, 1)).unwrap();
        let an = capacity_approx(&p, n, eps).unwrap().lambda;
        assert_eq!(mc.kind, CapacityKind::MonteCarlo);
        assert!(mc.stderr > 0.0);
        assert!((mc.lambda / an - 1.0).abs() <= band, "eps {eps}: ratio {}", mc.lambda / an);
    }
}

#[test]
fn solved_density_with_noise() {
    let p = il(4.0, 0.25).with_snr(Snr::from_db(20.0).unwrap()).unwrap();
    for n in [2u32, 6, 9] {
        let mc = solve_capacity(&p, n, 0.1, FadingModel::PathLossOnly, &cfg(50_000, 2)).unwrap();
        let an = capacity_approx(&p, n, 0.1).unwrap().lambda;
        assert!((mc.lambda / an - 1.0).abs() <= 0.15, "n {n}: ratio {}", mc.lambda / an);
    }
}

#[test]
fn noise_floor_above_target_is_infeasible() {
    // SNR so low that noise alone exceeds the threshold
    let p = il(4.0, 2.0).with_snr(Snr::from_db(-10.0).unwrap()).unwrap();
    let err = solve_capacity(&p, 1, 0.1, FadingModel::PathLossOnly, &cfg(1000, 0)).unwrap_err();
    assert!(matches!(err, Error::InfeasibleAtZeroDensity { .. }), "{err}");
}
