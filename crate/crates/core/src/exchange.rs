//! Exchange pulses and the unitaries they generate.
//!
//! A pulse of exchange `J(t)` applied for time `T` produces
//! `U = exp(-i θ s1·s2)` with `θ = ∫ J dt / (2ħ)`. The public surface takes
//! `J` as an angular frequency `J/ħ` in rad/s, so `θ = ∫ (J/ħ) dt / 2`.
//!
//! The spectrum of `s1·s2` is `+1/4` on the triplet and `-3/4` on the
//! singlet, hence `U(θ) = e^{-iθ/4} (P_t + e^{iθ} P_s)`. Comparing with
//! `SWAP^α = P_t + e^{iπα} P_s` gives `θ = πα`, i.e. `JT = 2πħα`
//! (`JT = πħ` for the square root of SWAP).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{spin_dot_operator, Complex64, ComplexMat, Unitary4};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// One `(t, J/ħ)` sample of a time-dependent exchange profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub t: f64,
    pub j_rad_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Constant { j_rad_s: f64 },
    Profile(Vec<ProfileSample>),
}

/// A nominal exchange pulse: constant strength for a duration, or a sampled
/// profile spanning `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    shape: Shape,
    duration: f64,
}

impl PulseSpec {
    /// Constant pulse with `J/ħ` in rad/s and duration in seconds.
    pub fn constant(j_rad_s: f64, duration: f64) -> Result<Self> {
        if !j_rad_s.is_finite() || j_rad_s < 0.0 {
            return Err(Error::invalid("J", "exchange must be finite and >= 0"));
        }
        if !duration.is_finite() || duration <= 0.0 {
            return Err(Error::invalid("T", "duration must be finite and > 0"));
        }
        Ok(Self {
            shape: Shape::Constant { j_rad_s },
            duration,
        })
    }

    /// Constant pulse with `J` given as an energy in joules.
    pub fn constant_energy(j_joules: f64, duration: f64) -> Result<Self> {
        Self::constant(j_joules / HBAR, duration)
    }

    /// Constant pulse realizing `SWAP^alpha` at the given exchange strength.
    pub fn for_swap_power(alpha: f64, j_rad_s: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(
                "alpha",
                "must be finite and > 0 to fix a duration",
            ));
        }
        Self::constant(j_rad_s, 2.0 * PI * alpha / j_rad_s)
    }

    /// Sampled profile. Times must start at 0 and increase strictly; the
    /// last time is the pulse duration.
    pub fn profile(samples: Vec<ProfileSample>) -> Result<Self> {
        let first = samples.first().ok_or(Error::EmptyProfile)?;
        if first.t != 0.0 {
            return Err(Error::invalid("profile", "first sample must be at t = 0"));
        }
        for (i, s) in samples.iter().enumerate() {
            if !s.t.is_finite() || !s.j_rad_s.is_finite() || s.j_rad_s < 0.0 {
                return Err(Error::invalid(
                    "profile",
                    format!("sample {i} must have finite t and finite J >= 0"),
                ));
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(Error::NonMonotoneProfile { index: i });
            }
        }
        let duration = samples.last().map(|s| s.t).unwrap_or(0.0);
        if duration <= 0.0 {
            return Err(Error::invalid("profile", "must span a positive duration"));
        }
        Ok(Self {
            shape: Shape::Profile(samples),
            duration,
        })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Constant `J/ħ`, or `None` for profile pulses.
    pub fn constant_exchange(&self) -> Option<f64> {
        match self.shape {
            Shape::Constant { j_rad_s } => Some(j_rad_s),
            Shape::Profile(_) => None,
        }
    }

    pub fn samples(&self) -> Option<&[ProfileSample]> {
        match &self.shape {
            Shape::Constant { .. } => None,
            Shape::Profile(s) => Some(s),
        }
    }

    /// `∫ (J/ħ) dt` in radians; trapezoidal for profiles.
    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Constant { j_rad_s } => j_rad_s * self.duration,
            Shape::Profile(s) => s
                .windows(2)
                .map(|w| 0.5 * (w[0].j_rad_s + w[1].j_rad_s) * (w[1].t - w[0].t))
                .sum(),
        }
    }

    /// Same shape with exchange multiplied by `amplitude` and time axis
    /// stretched to `duration`.
    pub fn perturbed(&self, amplitude: f64, duration: f64) -> Result<Self> {
        match &self.shape {
            Shape::Constant { j_rad_s } => Self::constant(j_rad_s * amplitude, duration),
            Shape::Profile(s) => {
                let stretch = duration / self.duration;
                Self::profile(
                    s.iter()
                        .map(|p| ProfileSample {
                            t: p.t * stretch,
                            j_rad_s: p.j_rad_s * amplitude,
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Dimensionless coefficient `θ` of `s1·s2` in the gate exponent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExchangePhase(f64);

impl ExchangePhase {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() {
            Ok(Self(theta))
        } else {
            Err(Error::invalid("theta", "must be finite"))
        }
    }

    /// `θ = πα`, the phase whose gate equals `SWAP^α` up to global phase.
    pub fn for_swap_power(alpha: f64) -> Result<Self> {
        Self::new(PI * alpha)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `θ` reduced into `[0, 2π)`. Comparison helper only.
    pub fn reduced(self) -> f64 {
        self.0.rem_euclid(TAU)
    }
}

pub fn phase_from_pulse(pulse: &PulseSpec) -> ExchangePhase {
    ExchangePhase(0.5 * pulse.area())
}

/// Projector onto the singlet: `I/4 - s1·s2`.
pub fn singlet_projector() -> ComplexMat {
    ComplexMat::identity(4)
        .expect("4 is supported")
        .scale(Complex64::new(0.25, 0.0))
        - spin_dot_operator()
}

/// Projector onto the triplet: `3I/4 + s1·s2`.
pub fn triplet_projector() -> ComplexMat {
    ComplexMat::identity(4)
        .expect("4 is supported")
        .scale(Complex64::new(0.75, 0.0))
        + spin_dot_operator()
}

fn spectral_gate(triplet_phase: Complex64, singlet_phase: Complex64) -> Unitary4 {
    let m = triplet_projector().scale(triplet_phase) + singlet_projector().scale(singlet_phase);
    Unitary4::from_matrix_unchecked(m)
}

/// `exp(-i θ s1·s2)` in closed spectral form.
pub fn exchange_unitary(theta: ExchangePhase) -> Unitary4 {
    let t = theta.value();
    spectral_gate(
        Complex64::from_polar(1.0, -t / 4.0),
        Complex64::from_polar(1.0, 3.0 * t / 4.0),
    )
}

/// `SWAP^α = P_t + e^{iπα} P_s` (principal branch). Differs from
/// `exchange_unitary(πα)` by the global phase `e^{-iπα/4}`.
pub fn swap_power_target(alpha: f64) -> Result<Unitary4> {
    if !alpha.is_finite() {
        return Err(Error::invalid("alpha", "must be finite"));
    }
    Ok(spectral_gate(
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, PI * alpha),
    ))
}

/// Process infidelity between `U(θ)` and `U(θ + Δθ)`:
/// `(3/8)(1 - cos Δθ)`, evaluated as `(3/4) sin²(Δθ/2)` to keep precision
/// for small errors. Independent of `θ`.
pub fn gate_error_vs_phase(delta_theta: f64) -> f64 {
    let s = (0.5 * delta_theta).sin();
    0.75 * s * s
}

/// Leading-order small-error form `(3/16) Δθ²`.
pub fn gate_error_leading_order(delta_theta: f64) -> f64 {
    3.0 / 16.0 * delta_theta * delta_theta
}

/// Phase error produced by relative exchange and duration errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseError {
    /// `θ[(1 + δJ/J)(1 + δT/T) - 1]`.
    pub exact: f64,
    /// `θ(δJ/J + δT/T)`.
    pub first_order: f64,
}

pub fn relative_error_to_phase_error(
    theta: ExchangePhase,
    dj_over_j: f64,
    dt_over_t: f64,
) -> Result<PhaseError> {
    for (name, v) in [("dJ/J", dj_over_j), ("dT/T", dt_over_t)] {
        if !v.is_finite() || v.abs() >= 1.0 {
            return Err(Error::invalid(name, "relative error must satisfy |x| < 1"));
        }
    }
    let t = theta.value();
    Ok(PhaseError {
        // expanded so that the second-order term is not lost to cancellation
        exact: t * (dj_over_j + dt_over_t + dj_over_j * dt_over_t),
        first_order: t * (dj_over_j + dt_over_t),
    })
}
