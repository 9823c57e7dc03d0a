use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

/// Entrywise Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Largest supported Hilbert-space dimension (16 qubits).
pub const MAX_DIM: usize = 1 << 16;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite,
/// with a power-of-two dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: Matrix,
}

impl DensityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let dim = m.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        if dim > MAX_DIM {
            return Err(Error::SizeLimit {
                what: "density matrix dimension",
                value: dim,
                max: MAX_DIM,
            });
        }
        let herm = m.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min_eig = m
            .hermitian_eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { m })
    }

    /// Symmetrizes `m` and rescales it to unit trace before validating.
    ///
    /// For matrices that are density matrices up to rounding, such as
    /// normalized post-measurement states.
    pub fn from_unnormalized(m: &Matrix) -> Result<Self> {
        let h = m.hermitian_part();
        let tr = h.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} cannot be normalized")));
        }
        Self::new(h.scale_real(1.0 / tr))
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_real_diag(diag))
    }

    /// The maximally mixed state on `dim` levels.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(Matrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// A pure state `|psi><psi|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Self::new(Matrix::outer(psi, psi).scale_real(1.0 / norm2))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.m.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.m.hermitian_eigenvalues()
    }

    /// Principal square root, with eigenvalues inside the PSD tolerance
    /// clipped to zero.
    pub fn sqrt(&self) -> Result<Matrix> {
        self.m.hermitian_map(|x| x.max(0.0).sqrt())
    }
}
