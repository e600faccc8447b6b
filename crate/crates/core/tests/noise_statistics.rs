use exchange_budget::exchange::PulseSpec;
use exchange_budget::noise::{
    db_to_amplitude_snr, integrated_snr, photon_number_factor, rectification_exchange,
    sample_pulse, sample_pulse_resampling, shot_noise_relative_amplitude, ControlNoiseSpec,
    NoiseDistribution, RectificationMap,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

const J: f64 = 1e9;
const T: f64 = 1e-9;

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn check_draws(distribution: NoiseDistribution, seed: u64) {
    let (sa, st) = (1e-2, 2e-11);
    let noise = ControlNoiseSpec::broadband(sa, st, distribution).unwrap();
    let nominal = PulseSpec::constant(J, T).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1_000_000;
    let mut amp = Vec::with_capacity(n);
    let mut dur = Vec::with_capacity(n);
    for _ in 0..n {
        let p = sample_pulse(&mut rng, &nominal, &noise).unwrap();
        amp.push(p.constant_exchange().unwrap() / J - 1.0);
        dur.push(p.duration() - T);
    }
    for (xs, sigma) in [(&amp, sa), (&dur, st)] {
        let (mean, sd) = moments(xs);
        let se = sigma / (n as f64).sqrt();
        assert!(
            mean.abs() < 5.0 * se,
            "{distribution:?}: mean {mean:e} vs 5 SE {:e}",
            5.0 * se
        );
        assert!(
            (sd / sigma - 1.0).abs() < 0.01,
            "{distribution:?}: sd {sd:e} vs {sigma:e}"
        );
    }
}

#[test]
fn gaussian_draws_have_requested_moments() {
    check_draws(NoiseDistribution::Gaussian, 11);
}

#[test]
fn uniform_draws_have_requested_moments() {
    check_draws(NoiseDistribution::Uniform, 12);
}

#[test]
fn uniform_draws_stay_within_half_width() {
    let sigma = 0.1;
    let noise = ControlNoiseSpec::broadband(sigma, 0.0, NoiseDistribution::Uniform).unwrap();
    let nominal = PulseSpec::constant(J, T).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bound = 3f64.sqrt() * sigma * (1.0 + 1e-12);
    for _ in 0..100_000 {
        let a = sample_pulse(&mut rng, &nominal, &noise)
            .unwrap()
            .constant_exchange()
            .unwrap()
            / J
            - 1.0;
        assert!(a.abs() <= bound);
    }
}

#[test]
fn rejections_are_rare_when_jitter_is_small() {
    let noise = ControlNoiseSpec::broadband(0.0, T / 5.5, NoiseDistribution::Gaussian).unwrap();
    let nominal = PulseSpec::constant(J, T).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 200_000;
    let mut rejected = 0u64;
    for _ in 0..n {
        let (p, r) = sample_pulse_resampling(&mut rng, &nominal, &noise).unwrap();
        assert!(p.duration() > 0.0);
        rejected += u64::from(r);
    }
    // P(Z < -5.5) ≈ 1.9e-8
    assert!((rejected as f64) / (n as f64) < 1e-4, "{rejected}");
}

#[test]
fn rejections_match_tail_probability_for_large_jitter() {
    // sigma_T = T: one draw in six or so lands at T' <= 0
    let noise = ControlNoiseSpec::broadband(0.0, T, NoiseDistribution::Gaussian).unwrap();
    let nominal = PulseSpec::constant(J, T).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 200_000;
    let rejected = (0..n)
        .filter(|_| sample_pulse(&mut rng, &nominal, &noise).is_err())
        .count() as f64;
    let p = 0.158_655_253_931_457; // Φ(-1)
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((rejected / n as f64 - p).abs() < 5.0 * se);
}

#[test]
fn shot_noise_matches_poisson_photon_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n_photons in [1e2, 1e4, 1e6] {
        let dist = Poisson::new(n_photons).unwrap();
        let draws: Vec<f64> = (0..200_000).map(|_| dist.sample(&mut rng)).collect();
        let (mean, sd) = moments(&draws);
        let empirical = sd / mean;
        let predicted = shot_noise_relative_amplitude(n_photons).unwrap();
        assert!(
            (empirical / predicted - 1.0).abs() < 0.01,
            "{n_photons}: {empirical} vs {predicted}"
        );
    }
}

#[test]
fn photon_factor_scales_shot_noise_down() {
    let n0 = 1e6;
    let s0 = shot_noise_relative_amplitude(n0).unwrap();
    let k = photon_number_factor(s0, 1e-5).unwrap();
    let s1 = shot_noise_relative_amplitude(n0 * k).unwrap();
    assert!((s1 / 1e-5 - 1.0).abs() < 1e-12);
}

#[test]
fn snr_conventions() {
    assert!((db_to_amplitude_snr(80.0).0 - 1e4).abs() < 1e-8);
    assert!((integrated_snr(5e-4).unwrap().0 - 2000.0).abs() < 1e-9);
    assert!(integrated_snr(0.0).unwrap().is_infinite());
}

#[test]
fn rectification_exchange_increases_with_intensity() {
    let map = RectificationMap::new(1e12, 6.0, 0.5).unwrap();
    let mut last = map.dark_exchange();
    for k in 1..=20 {
        let j = map.exchange_at(0.1 * k as f64).unwrap();
        assert!(j > last);
        last = j;
    }
    assert!((last - 1e12).abs() / last < 1e-12);
    assert!((map.exchange_at(1.0).unwrap() - 1e12 * (-3f64).exp()).abs() / 1e9 < 1e-9);
    assert!(map.exchange_at(2.01).is_err());

    let pulse = rectification_exchange(&map, &[(0.0, 0.0), (1e-9, 1.0), (2e-9, 0.0)]).unwrap();
    assert!(pulse.area() > 2e-9 * map.dark_exchange());
}
