//! Dense complex linear algebra on the one- and two-spin Hilbert spaces.
//!
//! Basis ordering is `|00>, |01>, |10>, |11>` with qubit 1 as the left
//! tensor factor. Spin operators are dimensionless (`s = sigma / 2`).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for construction-time invariant checks.
pub const INVARIANT_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
pub const EIGEN_FLOOR: f64 = -1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix of dimension 2 or 4, stored row-major inline.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMat {
    dim: usize,
    data: [Complex64; 16],
}

impl ComplexMat {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_row_major(entries: &[Complex64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension((n as f64).sqrt() as usize)),
        };
        Self::from_fn(dim, |r, c| entries[r * dim + c])
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::from_fn(N, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { ZERO })
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.dim && col < self.dim, "index out of range");
        self.data[row * self.dim + col]
    }

    /// Row-major view of the `dim * dim` entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        let n = self.dim;
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = self.data[c * n + r].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= k);
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Max-abs entry norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitary_deviation(&self) -> f64 {
        let eye = Self::identity(self.dim).expect("dim already validated");
        (self.adjoint() * *self).max_abs_diff(&eye)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    fn to_nalgebra(self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, self.entries())
    }

    /// Spectral decomposition of a Hermitian matrix: ascending eigenvalues
    /// and the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMat)> {
        let deviation = self.hermitian_deviation();
        if deviation > INVARIANT_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(self.dim, |r, c| eig.eigenvectors[(r, order[c])])?;
        Ok((values, vectors))
    }
}

impl fmt::Debug for ComplexMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMat({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

impl Mul for ComplexMat {
    type Output = ComplexMat;

    fn mul(self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = ComplexMat {
            dim: n,
            data: [ZERO; 16],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for ComplexMat {
    type Output = ComplexMat;

    fn add(mut self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        self.data
            .iter_mut()
            .zip(rhs.data)
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for ComplexMat {
    type Output = ComplexMat;

    fn sub(mut self, rhs: ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        self.data
            .iter_mut()
            .zip(rhs.data)
            .for_each(|(a, b)| *a -= b);
        self
    }
}

/// A 4x4 unitary on the two-spin space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary4(ComplexMat);

impl Unitary4 {
    pub fn new(m: ComplexMat) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: m.dim(),
            });
        }
        let deviation = m.unitary_deviation();
        if deviation > INVARIANT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(ComplexMat::identity(4).expect("4 is supported"))
    }

    /// Callers guarantee unitarity by construction (closed-form spectral forms).
    pub(crate) fn from_matrix_unchecked(m: ComplexMat) -> Self {
        debug_assert!(m.dim() == 4 && m.unitary_deviation() <= INVARIANT_TOL);
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMat {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, next: &Unitary4) -> Unitary4 {
        // `next` acts after `self`.
        Unitary4(next.0 * self.0)
    }
}

impl Mul for Unitary4 {
    type Output = Unitary4;

    fn mul(self, rhs: Unitary4) -> Unitary4 {
        Unitary4(self.0 * rhs.0)
    }
}

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4(ComplexMat);

impl DensityMatrix4 {
    pub fn new(m: ComplexMat) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: m.dim(),
            });
        }
        let deviation = m.hermitian_deviation();
        if deviation > INVARIANT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > INVARIANT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let (values, _) = m.eigh()?;
        if let Some(&min) = values.first() {
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMat) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMat {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigh().map(|(v, _)| v).unwrap_or_default()
    }

    pub fn evolve(&self, u: &Unitary4) -> DensityMatrix4 {
        DensityMatrix4(u.0 * self.0 * u.0.adjoint())
    }
}

pub fn pauli_x() -> ComplexMat {
    ComplexMat::from_real_rows([[0.0, 1.0], [1.0, 0.0]]).expect("finite")
}

pub fn pauli_y() -> ComplexMat {
    ComplexMat::from_row_major(&[ZERO, -I, I, ZERO]).expect("finite")
}

pub fn pauli_z() -> ComplexMat {
    ComplexMat::from_real_rows([[1.0, 0.0], [0.0, -1.0]]).expect("finite")
}

/// Tensor product `a ⊗ b` of two 2x2 matrices; `a` acts on qubit 1.
pub fn kron(a: &ComplexMat, b: &ComplexMat) -> Result<ComplexMat> {
    for m in [a, b] {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    ComplexMat::from_fn(4, |r, c| a.get(r / 2, c / 2) * b.get(r % 2, c % 2))
}

/// The SWAP permutation `|ab> -> |ba>`.
pub fn swap_matrix() -> ComplexMat {
    ComplexMat::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("finite")
}

/// `s1 · s2 = (σx⊗σx + σy⊗σy + σz⊗σz) / 4`.
pub fn spin_dot_operator() -> ComplexMat {
    let sum = [pauli_x(), pauli_y(), pauli_z()]
        .iter()
        .map(|p| kron(p, p).expect("2x2 inputs"))
        .reduce(|a, b| a + b)
        .expect("three terms");
    sum.scale(Complex64::new(0.25, 0.0))
}

/// `exp(-i θ H)` for Hermitian `H`, via spectral decomposition.
pub fn expm_hermitian(h: &ComplexMat, theta: f64) -> Result<ComplexMat> {
    if !theta.is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    let (values, vectors) = h.eigh()?;
    let phases: Vec<Complex64> = values
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -theta * lambda))
        .collect();
    let u = vectors * ComplexMat::diagonal(&phases)? * vectors.adjoint();
    let deviation = u.unitary_deviation();
    if deviation > INVARIANT_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}

/// `|Tr(U† V)|² / d²`, invariant under global phase.
pub fn process_fidelity(u: &Unitary4, v: &Unitary4) -> f64 {
    let overlap = (u.0.adjoint() * v.0).trace().norm_sqr();
    (overlap / 16.0).clamp(0.0, 1.0)
}

/// Process fidelity to average gate fidelity for `d = 4`.
pub fn average_gate_fidelity(process_fidelity: f64) -> f64 {
    (4.0 * process_fidelity + 1.0) / 5.0
}

/// `|ψ><ψ|` for a normalized 4-component state.
pub fn density_from_pure(psi: &[Complex64; 4]) -> Result<DensityMatrix4> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > INVARIANT_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let m = ComplexMat::from_fn(4, |r, c| psi[r] * psi[c].conj())?;
    Ok(DensityMatrix4(m))
}
