//! Monte Carlo estimation of gate infidelity under sampled control noise
//! and dephasing.
//!
//! Every sample owns an RNG substream derived from `(seed, sample_index)`:
//! the ChaCha8 key is `seed` expanded by `SeedableRng::seed_from_u64` and
//! the stream id is the sample index. Samples are evaluated in any order or
//! partitioning, collected by index, and reduced serially, so results are
//! bit-identical for every worker count.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decoherence::{
    dephasing_channel, dephasing_infidelity, entanglement_fidelity, DephasingSpec,
};
use crate::error::{Error, Result};
use crate::exchange::{
    exchange_unitary, gate_error_leading_order, gate_error_vs_phase, phase_from_pulse,
    swap_power_target, PulseSpec,
};
use crate::noise::{sample_pulse, sample_pulse_resampling, ControlNoiseSpec};

pub const HISTOGRAM_BINS: usize = 64;
pub const HISTOGRAM_MIN_DECADE: f64 = -16.0;

/// What to do with a draw whose duration is non-positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RejectPolicy {
    /// Redraw up to 100 times, then fail the run.
    #[default]
    Resample,
    /// Drop the sample and count it in `n_rejected`.
    Discard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub target_alpha: f64,
    pub nominal: PulseSpec,
    /// Control-field noise; amplitude noise is scaled by `sensitivity`
    /// before it reaches the exchange.
    pub noise: ControlNoiseSpec,
    pub dephasing: Option<DephasingSpec>,
    pub sensitivity: f64,
    pub reject_policy: RejectPolicy,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::invalid("n_samples", "must be >= 1"));
        }
        if !self.target_alpha.is_finite() {
            return Err(Error::invalid("target_alpha", "must be finite"));
        }
        if !(self.sensitivity.is_finite() && self.sensitivity >= 0.0) {
            return Err(Error::invalid("sensitivity", "must be finite and >= 0"));
        }
        self.noise.validate()
    }

    fn exchange_noise(&self) -> ControlNoiseSpec {
        ControlNoiseSpec {
            sigma_a: self.noise.sigma_a * self.sensitivity,
            ..self.noise
        }
    }

    /// Small-noise prediction of the mean infidelity: the nominal area
    /// offset plus `(3/16) E[Δθ²]` with `E[Δθ²] = θ²((s σ_A)² + (σ_T/T)²)`,
    /// combined with the dephasing infidelity at the nominal duration.
    pub fn analytic_prediction(&self) -> f64 {
        let theta = phase_from_pulse(&self.nominal).value();
        let t = self.nominal.duration();
        let sa = self.noise.sigma_a * self.sensitivity;
        let st = self.noise.sigma_t / t;
        let offset = gate_error_vs_phase(theta - std::f64::consts::PI * self.target_alpha);
        let coherent = offset + gate_error_leading_order(theta) * (sa * sa + st * st);
        let deph = self.dephasing.map_or(0.0, |d| dephasing_infidelity(t, &d));
        1.0 - (1.0 - coherent) * (1.0 - deph)
    }
}

/// Log-spaced histogram over `[1e-16, 1]`; smaller values land in bin 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    fn new() -> Self {
        Self {
            counts: vec![0; HISTOGRAM_BINS],
        }
    }

    pub fn bin_index(x: f64) -> usize {
        let width = -HISTOGRAM_MIN_DECADE / HISTOGRAM_BINS as f64;
        if x.is_nan() || x <= 0.0 {
            return 0;
        }
        let k = ((x.log10() - HISTOGRAM_MIN_DECADE) / width).floor();
        k.clamp(0.0, (HISTOGRAM_BINS - 1) as f64) as usize
    }

    /// `(low, high)` edges of bin `k`.
    pub fn bin_edges(k: usize) -> (f64, f64) {
        let width = -HISTOGRAM_MIN_DECADE / HISTOGRAM_BINS as f64;
        let lo = HISTOGRAM_MIN_DECADE + width * k as f64;
        (10f64.powf(lo), 10f64.powf(lo + width))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub mean_infidelity: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Histogram,
    pub n_samples: u64,
    /// Samples dropped under [`RejectPolicy::Discard`].
    pub n_rejected: u64,
    /// Draws redrawn under [`RejectPolicy::Resample`].
    pub n_resampled: u64,
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

enum Outcome {
    Accepted { infidelity: f64, resampled: u32 },
    Discarded,
}

struct Prepared<'a> {
    cfg: &'a McConfig,
    noise: ControlNoiseSpec,
    target: crate::linalg::Unitary4,
}

impl Prepared<'_> {
    fn run(&self, index: u64) -> Result<Outcome> {
        let mut rng = sample_rng(self.cfg.seed, index);
        let (pulse, resampled) = match self.cfg.reject_policy {
            RejectPolicy::Resample => {
                sample_pulse_resampling(&mut rng, &self.cfg.nominal, &self.noise)?
            }
            RejectPolicy::Discard => match sample_pulse(&mut rng, &self.cfg.nominal, &self.noise) {
                Ok(p) => (p, 0),
                Err(Error::RejectedSample { .. }) => return Ok(Outcome::Discarded),
                Err(e) => return Err(e),
            },
        };
        let actual = exchange_unitary(phase_from_pulse(&pulse));
        let channel = match &self.cfg.dephasing {
            Some(spec) => dephasing_channel(pulse.duration(), spec)?,
            None => crate::decoherence::QuantumChannel4::identity(),
        };
        let f = entanglement_fidelity(&channel, &actual, &self.target);
        Ok(Outcome::Accepted {
            infidelity: (1.0 - f).clamp(0.0, 1.0),
            resampled,
        })
    }
}

fn aggregate(outcomes: Vec<Outcome>, n_samples: u64) -> Result<McResult> {
    let mut histogram = Histogram::new();
    let mut n_rejected = 0u64;
    let mut n_resampled = 0u64;
    let mut accepted = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Outcome::Accepted {
                infidelity,
                resampled,
            } => {
                histogram.counts[Histogram::bin_index(infidelity)] += 1;
                n_resampled += u64::from(resampled);
                accepted.push(infidelity);
            }
            Outcome::Discarded => n_rejected += 1,
        }
    }
    if accepted.is_empty() {
        return Err(Error::RejectedSample { attempts: 1 });
    }
    let n = accepted.len() as f64;
    let mean = accepted.iter().sum::<f64>() / n;
    let stderr = if accepted.len() > 1 {
        let var = accepted
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let min = accepted.iter().copied().fold(f64::INFINITY, f64::min);
    let max = accepted.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(McResult {
        mean_infidelity: mean,
        stderr,
        min,
        max,
        histogram,
        n_samples,
        n_rejected,
        n_resampled,
    })
}

fn prepare(cfg: &McConfig) -> Result<Prepared<'_>> {
    cfg.validate()?;
    Ok(Prepared {
        cfg,
        noise: cfg.exchange_noise(),
        target: swap_power_target(cfg.target_alpha)?,
    })
}

/// Serial estimate.
pub fn estimate_infidelity(cfg: &McConfig) -> Result<McResult> {
    let p = prepare(cfg)?;
    let outcomes = (0..cfg.n_samples)
        .map(|i| p.run(i))
        .collect::<Result<Vec<_>>>()?;
    aggregate(outcomes, cfg.n_samples)
}

/// Estimate on `workers` threads; bit-identical to [`estimate_infidelity`].
pub fn estimate_infidelity_parallel(cfg: &McConfig, workers: usize) -> Result<McResult> {
    if workers <= 1 {
        return estimate_infidelity(cfg);
    }
    let p = prepare(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    let outcomes = pool.install(|| {
        (0..cfg.n_samples)
            .into_par_iter()
            .map(|i| p.run(i))
            .collect::<Result<Vec<_>>>()
    })?;
    aggregate(outcomes, cfg.n_samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    SigmaA,
    SigmaT,
    T2,
    TargetAlpha,
    /// Reference line only: the estimate does not depend on `ε`.
    Epsilon,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::SigmaA => "sigma_a",
            SweepAxis::SigmaT => "sigma_t",
            SweepAxis::T2 => "t2",
            SweepAxis::TargetAlpha => "target_alpha",
            SweepAxis::Epsilon => "epsilon",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma_a" => Ok(SweepAxis::SigmaA),
            "sigma_t" => Ok(SweepAxis::SigmaT),
            "t2" => Ok(SweepAxis::T2),
            "target_alpha" => Ok(SweepAxis::TargetAlpha),
            "epsilon" => Ok(SweepAxis::Epsilon),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub result: McResult,
    pub analytic_prediction: f64,
}

/// `template` with one parameter replaced.
pub fn apply_axis(template: &McConfig, axis: SweepAxis, value: f64) -> Result<McConfig> {
    let mut cfg = template.clone();
    match axis {
        SweepAxis::SigmaA => cfg.noise.sigma_a = value,
        SweepAxis::SigmaT => cfg.noise.sigma_t = value,
        SweepAxis::T2 => cfg.dephasing = Some(DephasingSpec::uniform(value)?),
        SweepAxis::TargetAlpha => {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::invalid(
                    "target_alpha",
                    "swept values must be finite and >= 0",
                ));
            }
            let theta = phase_from_pulse(&template.nominal).value();
            if theta <= 0.0 {
                return Err(Error::invalid(
                    "nominal",
                    "pulse area must be > 0 to retune",
                ));
            }
            let scale = std::f64::consts::PI * value / theta;
            cfg.nominal = template
                .nominal
                .perturbed(scale, template.nominal.duration())?;
            cfg.target_alpha = value;
        }
        SweepAxis::Epsilon => {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::invalid("epsilon", "must lie in (0, 1)"));
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// One independent estimate per value, each with the template's seed.
pub fn sweep(
    template: &McConfig,
    axis: SweepAxis,
    values: &[f64],
    workers: usize,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let cfg = apply_axis(template, axis, value)?;
            Ok(SweepRow {
                value,
                result: estimate_infidelity_parallel(&cfg, workers)?,
                analytic_prediction: cfg.analytic_prediction(),
            })
        })
        .collect()
}
