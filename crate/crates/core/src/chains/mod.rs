//! Spin-1/2 chains with periodic boundaries: Hamiltonians, thermal correlators
//! from exact diagonalization and free fermions, and the exact critical
//! anisotropies of the XXZ chain in a field.
//!
//! Site `j` of an `L`-site chain is tensor factor `j`, i.e. bit `L-1-j` of a
//! basis index, and a cleared bit is spin up.

mod ed;
mod free_fermion;
mod hamiltonian;
mod provider;
mod qcp;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ed::{
    dense_thermal_state, ed_correlators, ed_spectrum, DenseThermalState, Level, ThermalSpectrum,
};
pub use free_fermion::{xy_correlators, xy_correlators_with, Quadrature};
pub use hamiltonian::{hamiltonian_matrix, BondCouplings, SparseHamiltonian, DENSE_MAX_L};
pub use provider::{
    correlator_provider, CorrelatorProvider, Provenance, ProvidedCorrelators, Strategy,
};
pub use qcp::{xxz_field_for_eta, xxz_qcp_delta1, xxz_qcp_delta2};

/// Default upper bound on the chain length.
pub const DEFAULT_MAX_L: usize = 16;
/// Largest chain length accepted even with a raised limit.
pub const HARD_MAX_L: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    /// `sum_j [sx sx + sy sy + delta sz sz] - (h/2) sum_j sz`
    Xxz { delta: f64, h: f64 },
    /// `-(lambda/4) sum_j [(1+gamma) sx sx + (1-gamma) sy sy] - (1/2) sum_j sz`
    Xy { lambda: f64, gamma: f64 },
}

impl ModelSpec {
    pub fn xxz(delta: f64, h: f64) -> Result<Self> {
        let m = ModelSpec::Xxz { delta, h };
        m.validate()?;
        Ok(m)
    }

    pub fn xy(lambda: f64, gamma: f64) -> Result<Self> {
        let m = ModelSpec::Xy { lambda, gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Xxz { delta, h } => {
                if !delta.is_finite() || !h.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "XXZ parameters must be finite (delta={delta}, h={h})"
                    )));
                }
            }
            ModelSpec::Xy { lambda, gamma } => {
                if !gamma.is_finite() || !lambda.is_finite() || lambda < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "XY needs finite gamma and lambda >= 0 (lambda={lambda}, gamma={gamma})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn couplings(&self) -> BondCouplings {
        match *self {
            ModelSpec::Xxz { delta, h } => BondCouplings {
                jxx: 1.0,
                jyy: 1.0,
                jzz: delta,
                hz: h / 2.0,
            },
            ModelSpec::Xy { lambda, gamma } => BondCouplings {
                jxx: -lambda * (1.0 + gamma) / 4.0,
                jyy: -lambda * (1.0 - gamma) / 4.0,
                jzz: 0.0,
                hz: 0.5,
            },
        }
    }

    /// True when the total `sz` commutes with the Hamiltonian.
    pub fn conserves_magnetization(&self) -> bool {
        let c = self.couplings();
        c.jxx == c.jyy
    }

    pub fn is_xy(&self) -> bool {
        matches!(self, ModelSpec::Xy { .. })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Xxz { delta, h } => write!(f, "XXZ(delta={delta}, h={h})"),
            ModelSpec::Xy { lambda, gamma } => write!(f, "XY(lambda={lambda}, gamma={gamma})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub model: ModelSpec,
    /// Temperature with Boltzmann's constant absorbed; zero means ground state.
    pub kt: f64,
}

impl ThermalPoint {
    pub fn new(model: ModelSpec, kt: f64) -> Result<Self> {
        model.validate()?;
        if !(kt >= 0.0) || !kt.is_finite() {
            return Err(Error::InvalidArgument(format!("kT must be finite and >= 0, got {kt}")));
        }
        Ok(Self { model, kt })
    }
}

/// Number of sites of a periodic chain: even and at least 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct ChainSize(usize);

impl ChainSize {
    pub fn new(l: usize) -> Result<Self> {
        Self::with_limit(l, DEFAULT_MAX_L)
    }

    /// Like [`ChainSize::new`] with a caller-chosen maximum (at most [`HARD_MAX_L`]).
    pub fn with_limit(l: usize, max: usize) -> Result<Self> {
        let max = max.min(HARD_MAX_L);
        if l > max {
            return Err(Error::SizeLimit { what: "chain length", value: l, max });
        }
        if l < 4 || !l.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "chain length must be even and >= 4, got {l}"
            )));
        }
        Ok(Self(l))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for ChainSize {
    type Error = Error;
    fn try_from(l: usize) -> Result<Self> {
        ChainSize::new(l)
    }
}

impl From<ChainSize> for usize {
    fn from(l: ChainSize) -> usize {
        l.0
    }
}

impl fmt::Display for ChainSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
