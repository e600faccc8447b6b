//! Fault-tolerance feasibility calculus for exchange gates.
//!
//! A gate of duration `T` driven by a technology with relative amplitude
//! noise `σ_A` and timing jitter `σ_T` on a platform with logarithmic
//! exchange sensitivity `s` and dephasing time `T2` meets a threshold `ε`
//! when
//!
//! ```text
//!     s·σ_A + σ_T / T < ε        (parameter accuracy)
//!     T < ε·T2                   (decoherence)
//! ```
//!
//! Both constraints are enforced jointly with the amplitude term independent
//! of `T`, giving the closed-form window `(σ_T / (ε - s·σ_A), ε·T2)`.
//! Bandwidth (`BW > 1/T`) is reported; it only gates the verdict in strict
//! mode.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{check_noise_figures, ControlNoiseSpec, NoiseDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlatformSpec {
    /// Dephasing time, seconds.
    pub t2: f64,
    /// Logarithmic sensitivity `(dJ/dE)(E/J)`.
    pub sensitivity: f64,
}

impl PlatformSpec {
    pub fn new(t2: f64, sensitivity: f64) -> Result<Self> {
        let p = Self { t2, sensitivity };
        p.validate()?;
        Ok(p)
    }

    /// Electron spins in Si: `T2 = 0.5 ms`, unit sensitivity.
    pub fn si_spin() -> Self {
        Self {
            t2: 0.5e-3,
            sensitivity: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t2.is_finite() && self.t2 > 0.0) {
            return Err(Error::invalid("t2", "must be finite and > 0"));
        }
        if !(self.sensitivity.is_finite() && self.sensitivity >= 0.0) {
            return Err(Error::invalid("sensitivity", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Built-in platforms addressable by name.
pub fn builtin_platform(name: &str) -> Option<PlatformSpec> {
    match name {
        "si-spin" => Some(PlatformSpec::si_spin()),
        _ => None,
    }
}

pub const BUILTIN_PLATFORMS: &[&str] = &["si-spin"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechnologySpec {
    pub name: String,
    /// RMS relative amplitude noise.
    pub sigma_a: f64,
    /// RMS timing jitter, seconds.
    pub sigma_t: f64,
    pub bw_low: f64,
    pub bw_high: f64,
    pub notes: String,
}

impl TechnologySpec {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("name", "must not be empty"));
        }
        check_noise_figures(self.sigma_a, self.sigma_t, self.bw_low, self.bw_high)
    }

    pub fn noise(&self, distribution: NoiseDistribution) -> Result<ControlNoiseSpec> {
        ControlNoiseSpec::new(
            self.sigma_a,
            self.sigma_t,
            distribution,
            self.bw_low,
            self.bw_high,
        )
    }
}

/// Fault-tolerance threshold `ε ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon < 1.0 {
            Ok(Self(epsilon))
        } else {
            Err(Error::invalid("epsilon", "must lie in (0, 1)"))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

/// `ε · T2`.
pub fn max_gate_time(eps: Threshold, t2: f64) -> f64 {
    eps.epsilon() * t2
}

/// `σ_T / share`: shortest gate whose relative timing error stays below `share`.
pub fn min_gate_time_from_jitter(sigma_t: f64, eps_share: f64) -> Result<f64> {
    if eps_share.is_nan() || eps_share <= 0.0 {
        return Err(Error::invalid("eps_share", "must be > 0"));
    }
    Ok(sigma_t / eps_share)
}

/// `1 / T`.
pub fn required_bandwidth(t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid("T", "must be > 0"));
    }
    Ok(1.0 / t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    Amplitude,
    Jitter,
    Decoherence,
    Bandwidth,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::Amplitude => "amplitude",
            Constraint::Jitter => "jitter",
            Constraint::Decoherence => "decoherence",
            Constraint::Bandwidth => "bandwidth",
        })
    }
}

/// Multipliers by which each figure must improve to reach the feasibility
/// boundary. `1.0` for constraints that are not limiting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImprovementFactors {
    /// Required reduction of `s·σ_A`.
    pub amplitude: f64,
    /// Required reduction of `σ_T`.
    pub jitter: f64,
    /// Required increase of `T2`.
    pub decoherence: f64,
    /// Required increase of the technology bandwidth.
    pub bandwidth: f64,
}

impl ImprovementFactors {
    fn none() -> Self {
        Self {
            amplitude: 1.0,
            jitter: 1.0,
            decoherence: 1.0,
            bandwidth: 1.0,
        }
    }

    pub fn get(&self, c: Constraint) -> f64 {
        match c {
            Constraint::Amplitude => self.amplitude,
            Constraint::Jitter => self.jitter,
            Constraint::Decoherence => self.decoherence,
            Constraint::Bandwidth => self.bandwidth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeasibilityOptions {
    /// Require `1/T <= bw_high` for every gate in the window.
    pub strict_bandwidth: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub epsilon: f64,
    /// Open interval `(T_min, T_max)` in seconds; `None` when empty.
    pub t_window: Option<(f64, f64)>,
    /// Ordered by severity; the first entry is the primary limit.
    pub limiting_constraints: Vec<Constraint>,
    pub improvement_factors: ImprovementFactors,
    /// Per-gate `δJ/J = s·σ_A`.
    pub amplitude_error: f64,
    /// `ε · T2`, seconds.
    pub t_max: f64,
    /// `σ_T / (ε - s·σ_A)`, seconds; `None` when the amplitude term alone
    /// exhausts the budget.
    pub t_min: Option<f64>,
    /// `σ_T / ε`, the jitter bound with a noiseless amplitude, seconds.
    pub t_min_jitter_only: f64,
    /// `1 / T_max`, the least bandwidth any admissible gate needs, Hz.
    pub required_bandwidth: f64,
    /// `1 / T_min` for the shortest admissible gate, Hz.
    pub required_bandwidth_at_t_min: Option<f64>,
    pub technology_bandwidth: f64,
    pub bandwidth_ok: bool,
    pub strict_bandwidth: bool,
}

impl FeasibilityReport {
    pub fn primary_limit(&self) -> Option<Constraint> {
        self.limiting_constraints.first().copied()
    }

    /// True when `T` lies in the reported window and satisfies every
    /// inequality as stated.
    pub fn admits(&self, t: f64, platform: &PlatformSpec, tech: &TechnologySpec) -> bool {
        let Some((lo, hi)) = self.t_window else {
            return false;
        };
        let in_window = t > lo && t < hi;
        let accuracy = platform.sensitivity * tech.sigma_a + tech.sigma_t / t < self.epsilon;
        let decoherence = t < self.epsilon * platform.t2;
        in_window && accuracy && decoherence
    }
}

pub fn feasibility(
    platform: &PlatformSpec,
    tech: &TechnologySpec,
    eps: Threshold,
) -> FeasibilityReport {
    feasibility_with(platform, tech, eps, FeasibilityOptions::default())
}

pub fn feasibility_with(
    platform: &PlatformSpec,
    tech: &TechnologySpec,
    eps: Threshold,
    options: FeasibilityOptions,
) -> FeasibilityReport {
    let epsilon = eps.epsilon();
    let amplitude_error = platform.sensitivity * tech.sigma_a;
    let t_max = max_gate_time(eps, platform.t2);
    let t_min_jitter_only = tech.sigma_t / epsilon;
    let bw_floor = if tech.bw_high.is_finite() {
        1.0 / tech.bw_high
    } else {
        0.0
    };

    let mut limiting = Vec::new();
    let mut factors = ImprovementFactors::none();

    let t_min = (amplitude_error < epsilon).then(|| tech.sigma_t / (epsilon - amplitude_error));

    if amplitude_error >= epsilon {
        limiting.push(Constraint::Amplitude);
        factors.amplitude = amplitude_error / epsilon;
    }
    // jitter vs decoherence, judged on the best case the amplitude term allows
    let jitter_bound = t_min.unwrap_or(t_min_jitter_only);
    if jitter_bound >= t_max {
        let ratio = jitter_bound / t_max;
        limiting.push(Constraint::Jitter);
        limiting.push(Constraint::Decoherence);
        factors.jitter = ratio;
        factors.decoherence = ratio;
    }

    let mut window = t_min.filter(|&lo| lo < t_max).map(|lo| (lo, t_max));

    let required_bandwidth = 1.0 / t_max;
    let bandwidth_ok = required_bandwidth <= tech.bw_high;
    if options.strict_bandwidth {
        if bw_floor >= t_max {
            limiting.push(Constraint::Bandwidth);
            factors.bandwidth = required_bandwidth / tech.bw_high;
        }
        window = window
            .map(|(lo, hi)| (lo.max(bw_floor), hi))
            .filter(|(lo, hi)| lo < hi);
    }

    let required_bandwidth_at_t_min = window
        .map(|(lo, _)| lo)
        .filter(|&lo| lo > 0.0)
        .map(|lo| 1.0 / lo);

    FeasibilityReport {
        feasible: window.is_some(),
        epsilon,
        t_window: window,
        limiting_constraints: limiting,
        improvement_factors: factors,
        amplitude_error,
        t_max,
        t_min,
        t_min_jitter_only,
        required_bandwidth,
        required_bandwidth_at_t_min,
        technology_bandwidth: tech.bw_high,
        bandwidth_ok,
        strict_bandwidth: options.strict_bandwidth,
    }
}

pub const ELECTRICAL_PULSE_GENERATOR: &str = "electrical-pulse-generator";
pub const MODELOCKED_LASER_10GHZ: &str = "modelocked-laser-10GHz";
pub const OPTICAL_RECTIFICATION_80DB: &str = "optical-rectification-80dB";

/// Technologies with published noise figures.
pub fn builtin_catalog() -> Vec<TechnologySpec> {
    vec![
        TechnologySpec {
            name: ELECTRICAL_PULSE_GENERATOR.into(),
            sigma_a: 1e-2,
            sigma_t: 100e-12,
            bw_low: 0.0,
            bw_high: 1e9,
            notes: "best available GHz-range electrical pulse generators: \
                    dV/V ~ 1e-2, pulse-length jitter dT ~ 100 ps"
                .into(),
        },
        TechnologySpec {
            name: MODELOCKED_LASER_10GHZ.into(),
            sigma_a: 5e-4,
            sigma_t: 240e-15,
            bw_low: 10.0,
            bw_high: 5e9,
            notes: "externally mode-locked femtosecond laser at 10 GHz repetition rate: \
                    intensity noise 0.05% and timing jitter 240 fs over 10 Hz - 5 GHz"
                .into(),
        },
        TechnologySpec {
            name: OPTICAL_RECTIFICATION_80DB.into(),
            sigma_a: 1e-4,
            sigma_t: 240e-15,
            bw_low: 0.0,
            bw_high: 1e12,
            notes: "optical rectification in a ferroelectric: ~80 dB accuracy \
                    (amplitude convention, SNR 1e4), > THz bandwidth; timing \
                    inherited from the 240 fs mode-locked laser"
                .into(),
        },
    ]
}

pub fn find_technology<'a>(
    catalog: &'a [TechnologySpec],
    name: &str,
) -> Option<&'a TechnologySpec> {
    catalog.iter().find(|t| t.name == name)
}
