//! Pure dephasing on each qubit and entanglement fidelity of noisy gates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron, pauli_z, Complex64, ComplexMat, DensityMatrix4, Unitary4, INVARIANT_TOL,
};

/// Per-qubit `T2` in seconds. `f64::INFINITY` means no dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingSpec {
    pub t2: [f64; 2],
}

impl DephasingSpec {
    pub fn new(t2_qubit1: f64, t2_qubit2: f64) -> Result<Self> {
        for t2 in [t2_qubit1, t2_qubit2] {
            if t2.is_nan() || t2 <= 0.0 {
                return Err(Error::invalid(
                    "T2",
                    "must be > 0 (or infinite for no dephasing)",
                ));
            }
        }
        Ok(Self {
            t2: [t2_qubit1, t2_qubit2],
        })
    }

    pub fn uniform(t2: f64) -> Result<Self> {
        Self::new(t2, t2)
    }

    pub fn none() -> Self {
        Self {
            t2: [f64::INFINITY; 2],
        }
    }
}

/// Phase-flip probability after time `t`: `(1 - e^{-t/T2}) / 2`.
pub fn phase_flip_probability(t: f64, t2: f64) -> f64 {
    0.5 * -(-t / t2).exp_m1()
}

/// Trace-preserving two-qubit channel in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel4 {
    kraus: Vec<ComplexMat>,
}

impl QuantumChannel4 {
    pub fn new(kraus: Vec<ComplexMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::IncompleteKraus { deviation: 1.0 });
        }
        if let Some(bad) = kraus.iter().find(|k| k.dim() != 4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: bad.dim(),
            });
        }
        let deviation = completeness_deviation(&kraus);
        if deviation > INVARIANT_TOL {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        Self {
            kraus: vec![ComplexMat::identity(4).expect("4 is supported")],
        }
    }

    pub fn unitary(u: &Unitary4) -> Self {
        Self {
            kraus: vec![*u.matrix()],
        }
    }

    pub fn kraus_ops(&self) -> &[ComplexMat] {
        &self.kraus
    }

    /// `max |Σ K†K - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        completeness_deviation(&self.kraus)
    }

    /// The channel that applies `self` and then `next`.
    pub fn then(&self, next: &QuantumChannel4) -> QuantumChannel4 {
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| *b * *a))
            .collect();
        QuantumChannel4 { kraus }
    }
}

fn completeness_deviation(kraus: &[ComplexMat]) -> f64 {
    let sum = kraus
        .iter()
        .map(|k| k.adjoint() * *k)
        .reduce(|a, b| a + b)
        .expect("non-empty Kraus set");
    sum.max_abs_diff(&ComplexMat::identity(4).expect("4 is supported"))
}

fn single_qubit_kraus(p: f64) -> Vec<ComplexMat> {
    let id = ComplexMat::identity(2).expect("2 is supported");
    if p == 0.0 {
        return vec![id];
    }
    vec![
        id.scale(Complex64::new((1.0 - p).sqrt(), 0.0)),
        pauli_z().scale(Complex64::new(p.sqrt(), 0.0)),
    ]
}

/// Independent phase-flip channel on both qubits for a duration `t`.
///
/// Single-qubit coherences decay by exactly `e^{-t/T2}`.
pub fn dephasing_channel(t: f64, spec: &DephasingSpec) -> Result<QuantumChannel4> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::invalid("T", "duration must be >= 0"));
    }
    let [k1, k2] = spec
        .t2
        .map(|t2| single_qubit_kraus(phase_flip_probability(t, t2)));
    let kraus = k1
        .iter()
        .flat_map(|a| k2.iter().map(move |b| kron(a, b).expect("2x2 factors")))
        .collect();
    QuantumChannel4::new(kraus)
}

/// `ρ' = Σ K ρ K†`.
pub fn apply_channel(channel: &QuantumChannel4, rho: &DensityMatrix4) -> DensityMatrix4 {
    let r = *rho.matrix();
    let out = channel
        .kraus
        .iter()
        .map(|k| *k * r * k.adjoint())
        .reduce(|a, b| a + b)
        .expect("non-empty Kraus set");
    DensityMatrix4::from_matrix_unchecked(out)
}

/// `F_e = Σ |Tr(V† K_i U)|² / 16` for the channel applied after the
/// realized unitary `U`, against the target `V`.
pub fn entanglement_fidelity(
    channel: &QuantumChannel4,
    actual: &Unitary4,
    target: &Unitary4,
) -> f64 {
    let v_dag = target.matrix().adjoint();
    let u = *actual.matrix();
    let total: f64 = channel
        .kraus
        .iter()
        .map(|k| (v_dag * *k * u).trace().norm_sqr())
        .sum();
    (total / 16.0).clamp(0.0, 1.0)
}

/// Entanglement fidelity to average gate fidelity for `d = 4`.
pub fn average_fidelity(entanglement_fidelity: f64) -> f64 {
    (4.0 * entanglement_fidelity + 1.0) / 5.0
}

/// Closed form `1 - F_e` for dephasing against the identity:
/// `1 - (1 - p1)(1 - p2)`. Only the `I⊗I` Kraus term has a nonzero trace.
pub fn dephasing_infidelity(t: f64, spec: &DephasingSpec) -> f64 {
    let keep: f64 = spec
        .t2
        .iter()
        .map(|&t2| 1.0 - phase_flip_probability(t, t2))
        .product();
    1.0 - keep
}
