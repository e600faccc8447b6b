//! Classical control imperfections.
//!
//! Noise is quasi-static per pulse: every gate draws one relative amplitude
//! error and one timing error. Figures are RMS values already integrated
//! over the control band.

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{ProfileSample, PulseSpec};

/// Maximum draws per sample before a rejected pulse becomes an error.
pub const MAX_RESAMPLE_ATTEMPTS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseDistribution {
    #[default]
    Gaussian,
    /// Zero-mean uniform with the given standard deviation (half-width `√3 σ`).
    Uniform,
}

impl std::str::FromStr for NoiseDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::invalid(
                "distribution",
                format!("unknown distribution `{other}` (expected gaussian|uniform)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlNoiseSpec {
    /// RMS relative amplitude noise.
    pub sigma_a: f64,
    /// RMS timing jitter, seconds.
    pub sigma_t: f64,
    pub distribution: NoiseDistribution,
    pub bandwidth_low: f64,
    pub bandwidth_high: f64,
}

impl ControlNoiseSpec {
    pub fn new(
        sigma_a: f64,
        sigma_t: f64,
        distribution: NoiseDistribution,
        bandwidth_low: f64,
        bandwidth_high: f64,
    ) -> Result<Self> {
        let spec = Self {
            sigma_a,
            sigma_t,
            distribution,
            bandwidth_low,
            bandwidth_high,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Noise with an unbounded band; useful when only the RMS figures matter.
    pub fn broadband(sigma_a: f64, sigma_t: f64, distribution: NoiseDistribution) -> Result<Self> {
        Self::new(sigma_a, sigma_t, distribution, 0.0, f64::INFINITY)
    }

    pub fn noiseless() -> Self {
        Self {
            sigma_a: 0.0,
            sigma_t: 0.0,
            distribution: NoiseDistribution::Gaussian,
            bandwidth_low: 0.0,
            bandwidth_high: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_noise_figures(
            self.sigma_a,
            self.sigma_t,
            self.bandwidth_low,
            self.bandwidth_high,
        )
    }
}

pub(crate) fn check_noise_figures(
    sigma_a: f64,
    sigma_t: f64,
    bw_low: f64,
    bw_high: f64,
) -> Result<()> {
    if !(sigma_a.is_finite() && sigma_a >= 0.0) {
        return Err(Error::invalid("sigma_a", "must be finite and >= 0"));
    }
    if !(sigma_t.is_finite() && sigma_t >= 0.0) {
        return Err(Error::invalid("sigma_t", "must be finite and >= 0"));
    }
    if !(bw_low.is_finite() && bw_low >= 0.0) {
        return Err(Error::invalid("bw_low", "must be finite and >= 0"));
    }
    if bw_high.is_nan() || bw_high <= bw_low {
        return Err(Error::invalid("bw_high", "must exceed bw_low"));
    }
    Ok(())
}

fn draw<R: Rng + ?Sized>(rng: &mut R, distribution: NoiseDistribution, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    match distribution {
        NoiseDistribution::Gaussian => Normal::new(0.0, sigma)
            .expect("sigma validated finite and positive")
            .sample(rng),
        NoiseDistribution::Uniform => {
            let half_width = 3f64.sqrt() * sigma;
            Uniform::new_inclusive(-half_width, half_width)
                .expect("finite bounds")
                .sample(rng)
        }
    }
}

/// One stochastic realization: `J' = J(1 + a)`, `T' = T + t`.
///
/// A draw with `T' <= 0` or `J' < 0` is rejected with
/// [`Error::RejectedSample`]; [`sample_pulse_resampling`] applies the retry
/// policy.
pub fn sample_pulse<R: Rng + ?Sized>(
    rng: &mut R,
    nominal: &PulseSpec,
    noise: &ControlNoiseSpec,
) -> Result<PulseSpec> {
    noise.validate()?;
    if noise.sigma_a == 0.0 && noise.sigma_t == 0.0 {
        return Ok(nominal.clone());
    }
    let a = draw(rng, noise.distribution, noise.sigma_a);
    let t = draw(rng, noise.distribution, noise.sigma_t);
    let amplitude = 1.0 + a;
    let duration = nominal.duration() + t;
    if duration <= 0.0 || amplitude < 0.0 {
        return Err(Error::RejectedSample { attempts: 1 });
    }
    nominal.perturbed(amplitude, duration)
}

/// Draws until a sample is accepted, at most [`MAX_RESAMPLE_ATTEMPTS`]
/// times. Returns the pulse and the number of rejected draws.
pub fn sample_pulse_resampling<R: Rng + ?Sized>(
    rng: &mut R,
    nominal: &PulseSpec,
    noise: &ControlNoiseSpec,
) -> Result<(PulseSpec, u32)> {
    for rejected in 0..MAX_RESAMPLE_ATTEMPTS {
        match sample_pulse(rng, nominal, noise) {
            Ok(p) => return Ok((p, rejected)),
            Err(Error::RejectedSample { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RejectedSample {
        attempts: MAX_RESAMPLE_ATTEMPTS,
    })
}

/// Band-integrated signal-to-noise ratio (amplitude ratio).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Snr(pub f64);

impl Snr {
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// True when the SNR exceeds `1/epsilon`.
    pub fn meets_threshold(self, epsilon: f64) -> bool {
        self.0 > 1.0 / epsilon
    }
}

/// `SNR = 1 / sigma_rel`; zero noise gives an infinite SNR.
pub fn integrated_snr(sigma_rel: f64) -> Result<Snr> {
    if !(sigma_rel.is_finite() && sigma_rel >= 0.0) {
        return Err(Error::invalid("sigma_rel", "must be finite and >= 0"));
    }
    if sigma_rel == 0.0 {
        return Ok(Snr(f64::INFINITY));
    }
    Ok(Snr(1.0 / sigma_rel))
}

/// SNR required to meet an error threshold: `1 / epsilon`.
pub fn required_snr(epsilon: f64) -> Snr {
    Snr(1.0 / epsilon)
}

/// Amplitude convention: `SNR = 10^(dB/20)`; 80 dB gives 10⁴.
pub fn db_to_amplitude_snr(db: f64) -> Snr {
    Snr(10f64.powf(db / 20.0))
}

/// Power convention: `SNR = 10^(dB/10)`.
pub fn db_to_power_snr(db: f64) -> Snr {
    Snr(10f64.powf(db / 10.0))
}

/// Shot-noise-limited relative amplitude noise `1/√n` for `n` photons.
pub fn shot_noise_relative_amplitude(n_photons: f64) -> Result<f64> {
    if !(n_photons.is_finite() && n_photons > 0.0) {
        return Err(Error::invalid("n_photons", "must be finite and > 0"));
    }
    Ok(n_photons.sqrt().recip())
}

/// Factor by which the photon number must grow to bring shot noise from
/// `current` to `target`.
pub fn photon_number_factor(current_sigma: f64, target_sigma: f64) -> Result<f64> {
    if !(current_sigma > 0.0 && target_sigma > 0.0) {
        return Err(Error::invalid("sigma", "noise levels must be > 0"));
    }
    let r = current_sigma / target_sigma;
    Ok(r * r)
}

/// `δJ/J = s · δE/E` with `s` the logarithmic sensitivity `(dJ/dE)(E/J)`.
pub fn sensitivity_map(delta_field_rel: f64, sensitivity: f64) -> Result<f64> {
    if !(sensitivity.is_finite() && sensitivity >= 0.0) {
        return Err(Error::invalid("sensitivity", "must be finite and >= 0"));
    }
    if !delta_field_rel.is_finite() {
        return Err(Error::invalid("delta_field_rel", "must be finite"));
    }
    Ok(sensitivity * delta_field_rel)
}

/// Phenomenological optical-rectification control map.
///
/// Illumination reduces the ferroelectric polarization magnitude by a
/// fraction `c·I`, lowering the inter-dot barrier proportionally. Exchange
/// follows the tunnelling overlap: `J = J0 · exp(-b0 (1 - c·I))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectificationMap {
    /// Bare exchange prefactor, rad/s.
    pub j0: f64,
    /// Dark barrier height in units of the overlap decay scale.
    pub b0: f64,
    /// Fractional polarization reduction per unit intensity.
    pub c: f64,
}

impl RectificationMap {
    pub fn new(j0: f64, b0: f64, c: f64) -> Result<Self> {
        if !(j0.is_finite() && j0 > 0.0) {
            return Err(Error::invalid("j0", "must be finite and > 0"));
        }
        if !(b0.is_finite() && b0 >= 0.0) {
            return Err(Error::invalid("b0", "must be finite and >= 0"));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::invalid("c", "must be finite and >= 0"));
        }
        Ok(Self { j0, b0, c })
    }

    pub fn dark_exchange(&self) -> f64 {
        self.j0 * (-self.b0).exp()
    }

    pub fn exchange_at(&self, intensity: f64) -> Result<f64> {
        let reduction = self.c * intensity;
        if !(intensity.is_finite() && intensity >= 0.0) || reduction > 1.0 {
            return Err(Error::invalid(
                "intensity",
                format!("{intensity} is inadmissible (need 0 <= c*I <= 1)"),
            ));
        }
        Ok(self.j0 * (-self.b0 * (1.0 - reduction)).exp())
    }
}

/// Maps an intensity profile `(t_i, I_i)` to an exchange profile.
pub fn rectification_exchange(
    map: &RectificationMap,
    intensity: &[(f64, f64)],
) -> Result<PulseSpec> {
    let samples = intensity
        .iter()
        .map(|&(t, i)| {
            Ok(ProfileSample {
                t,
                j_rad_s: map.exchange_at(i)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PulseSpec::profile(samples)
}
