use std::f64::consts::PI;

use exchange_budget::decoherence::DephasingSpec;
use exchange_budget::exchange::PulseSpec;
use exchange_budget::montecarlo::{
    estimate_infidelity, estimate_infidelity_parallel, sweep, McConfig, RejectPolicy, SweepAxis,
};
use exchange_budget::noise::{ControlNoiseSpec, NoiseDistribution};

const J: f64 = 2.0 * PI * 1e9;

fn config(sigma_a: f64, sigma_t: f64, n: u64) -> McConfig {
    McConfig {
        n_samples: n,
        seed: 42,
        target_alpha: 0.5,
        nominal: PulseSpec::for_swap_power(0.5, J).unwrap(),
        noise: ControlNoiseSpec::broadband(sigma_a, sigma_t, NoiseDistribution::Gaussian).unwrap(),
        dephasing: None,
        sensitivity: 1.0,
        reject_policy: RejectPolicy::Resample,
    }
}

#[test]
fn amplitude_noise_matches_quadratic_prediction() {
    let r = estimate_infidelity(&config(1e-3, 0.0, 100_000)).unwrap();
    let theta = PI / 2.0;
    let predicted = 3.0 / 16.0 * theta * theta * 1e-6;
    assert!(
        (r.mean_infidelity - predicted).abs() < 3.0 * r.stderr,
        "{r:?}"
    );
    assert_eq!(r.histogram.total(), 100_000);
}

#[test]
fn jitter_noise_matches_quadratic_prediction() {
    let cfg = config(0.0, 1e-12, 50_000);
    let r = estimate_infidelity(&cfg).unwrap();
    assert!((r.mean_infidelity - cfg.analytic_prediction()).abs() < 4.0 * r.stderr);
}

#[test]
fn uniform_noise_has_the_same_second_moment() {
    let mut cfg = config(1e-3, 0.0, 50_000);
    cfg.noise.distribution = NoiseDistribution::Uniform;
    let r = estimate_infidelity(&cfg).unwrap();
    assert!((r.mean_infidelity - cfg.analytic_prediction()).abs() < 4.0 * r.stderr);
}

#[test]
fn dephasing_only_gives_t_over_t2() {
    let mut cfg = config(0.0, 0.0, 1000);
    let t = cfg.nominal.duration();
    cfg.dephasing = Some(DephasingSpec::uniform(1e3 * t).unwrap());
    let r = estimate_infidelity(&cfg).unwrap();
    assert!(
        (r.mean_infidelity / 1e-3 - 1.0).abs() < 0.005,
        "{}",
        r.mean_infidelity
    );
    // deterministic: no spread
    assert_eq!(r.min, r.max);
    assert!((r.mean_infidelity - cfg.analytic_prediction()).abs() < 1e-15);
}

#[test]
fn infidelity_scales_with_amplitude_noise_squared() {
    let rows = sweep(
        &config(0.0, 0.0, 20_000),
        SweepAxis::SigmaA,
        &[1e-4, 1e-3, 1e-2],
        1,
    )
    .unwrap();
    let base = rows[0].result.mean_infidelity;
    for (row, ratio) in rows.iter().zip([1.0, 1e2, 1e4]) {
        let r = row.result.mean_infidelity / base;
        assert!((r / ratio - 1.0).abs() < 0.05, "{}: {r}", row.value);
        assert!((row.analytic_prediction / rows[0].analytic_prediction / ratio - 1.0).abs() < 1e-3);
    }
}

#[test]
fn longer_t2_never_hurts() {
    let t = config(0.0, 0.0, 1).nominal.duration();
    let values: Vec<f64> = (0..8).map(|k| t * 10f64.powi(k + 1)).collect();
    let rows = sweep(&config(1e-4, 1e-13, 5_000), SweepAxis::T2, &values, 1).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].result.mean_infidelity < w[0].result.mean_infidelity);
    }
}

#[test]
fn standard_error_shrinks_as_root_n() {
    let small = estimate_infidelity(&config(1e-3, 0.0, 1_000)).unwrap();
    let large = estimate_infidelity(&config(1e-3, 0.0, 100_000)).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((ratio / 10.0 - 1.0).abs() < 0.15, "{ratio}");
}

#[test]
fn worker_count_does_not_change_results() {
    let mut cfg = config(1e-3, 1e-12, 20_000);
    cfg.dephasing = Some(DephasingSpec::uniform(1e-6).unwrap());
    let serial = estimate_infidelity(&cfg).unwrap();
    for workers in [2, 3, 8] {
        assert_eq!(estimate_infidelity_parallel(&cfg, workers).unwrap(), serial);
    }
}

#[test]
fn seeds_change_results() {
    let a = estimate_infidelity(&config(1e-3, 0.0, 1_000)).unwrap();
    let mut cfg = config(1e-3, 0.0, 1_000);
    cfg.seed = 43;
    assert_ne!(
        estimate_infidelity(&cfg).unwrap().mean_infidelity,
        a.mean_infidelity
    );
}

#[test]
fn discard_policy_accounts_for_every_sample() {
    let t = config(0.0, 0.0, 1).nominal.duration();
    let mut cfg = config(0.0, t, 10_000);
    cfg.reject_policy = RejectPolicy::Discard;
    let r = estimate_infidelity(&cfg).unwrap();
    assert!(
        r.n_rejected > 1000 && r.n_rejected < 2200,
        "{}",
        r.n_rejected
    );
    assert_eq!(r.histogram.total() + r.n_rejected, 10_000);

    cfg.reject_policy = RejectPolicy::Resample;
    let r = estimate_infidelity(&cfg).unwrap();
    assert_eq!(r.n_rejected, 0);
    assert_eq!(r.histogram.total(), 10_000);
    assert!(r.n_resampled > 1000);
}

#[test]
fn swept_target_alpha_stays_on_target() {
    let rows = sweep(
        &config(0.0, 0.0, 10),
        SweepAxis::TargetAlpha,
        &[0.25, 0.5, 1.0, 2.0],
        1,
    )
    .unwrap();
    for row in rows {
        assert!(row.result.max < 1e-12, "{}: {}", row.value, row.result.max);
    }
}
