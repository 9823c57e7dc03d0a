//! Brute-force run of the protocol on explicit three-qubit density matrices.

use super::{real, rho1_from_z, rho23_from_correlators, CorrectionSet, PairCorrelators};
use crate::error::{Error, Result};
use crate::qmat::{
    bell_projector, partial_trace_matrix, tensor, trace_distance, uhlmann_fidelity, BellLabel,
    DensityMatrix, Matrix,
};

/// Outcomes with a smaller probability are flagged degenerate.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct TeleportOutcome {
    pub outcome: BellLabel,
    pub probability: f64,
    /// Bob's corrected qubit; `None` when the outcome is degenerate.
    pub bob_state: Option<DensityMatrix>,
}

impl TeleportOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.bob_state.is_none()
    }
}

/// Runs one round of the protocol for every Bell outcome.
///
/// The joint state is `rho1 ⊗ rho23`; Alice projects qubits 1 and 2 onto a
/// Bell state, Bob's qubit 3 is kept and corrected with the unitary from `set`.
pub fn teleport_engine(
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    set: CorrectionSet,
) -> Result<[TeleportOutcome; 4]> {
    if rho1.dim() != 2 || rho23.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a qubit and a qubit pair, got dimensions {} and {}",
            rho1.dim(),
            rho23.dim()
        )));
    }
    let rho = tensor(rho1, rho23)?;
    let id2 = Matrix::identity(2);

    let run = |j: BellLabel| -> Result<TeleportOutcome> {
        let proj = bell_projector(j).matrix().kron(&id2);
        let projected = &(&proj * rho.matrix()) * &proj;
        let probability = projected.trace().re;
        if probability < DEGENERATE_PROBABILITY {
            return Ok(TeleportOutcome {
                outcome: j,
                probability: probability.max(0.0),
                bob_state: None,
            });
        }
        let bob = partial_trace_matrix(&projected, &[2], &[2, 2, 2])?;
        let u = set.unitary(j);
        let corrected = &(&u * &bob) * &u.adjoint();
        let state = DensityMatrix::new(corrected.hermitian_part().scale(real(1.0 / probability)))?;
        Ok(TeleportOutcome {
            outcome: j,
            probability,
            bob_state: Some(state),
        })
    };

    Ok([
        run(BellLabel::PsiPlus)?,
        run(BellLabel::PsiMinus)?,
        run(BellLabel::PhiPlus)?,
        run(BellLabel::PhiMinus)?,
    ])
}

fn weighted_mean(
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    set: CorrectionSet,
    measure: impl Fn(&DensityMatrix, &DensityMatrix) -> Result<f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for o in teleport_engine(rho1, rho23, set)? {
        if let Some(bob) = &o.bob_state {
            total += o.probability * measure(rho1, bob)?;
        }
    }
    Ok(total)
}

/// `sum_j Q_j F(rho1, rho_Bj)` over non-degenerate outcomes.
pub fn engine_mean_fidelity(
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    set: CorrectionSet,
) -> Result<f64> {
    weighted_mean(rho1, rho23, set, uhlmann_fidelity)
}

/// `sum_j Q_j D(rho1, rho_Bj)` over non-degenerate outcomes.
pub fn engine_mean_trace_distance(
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    set: CorrectionSet,
) -> Result<f64> {
    weighted_mean(rho1, rho23, set, trace_distance)
}

/// Mean fidelity and mean trace distance of the thermal protocol built from
/// `c`, computed by the engine.
pub fn engine_efficiency(c: &PairCorrelators, set: CorrectionSet) -> Result<(f64, f64)> {
    let rho1 = rho1_from_z(c.z())?;
    let rho23 = rho23_from_correlators(c)?;
    Ok((
        engine_mean_fidelity(&rho1, &rho23, set)?,
        engine_mean_trace_distance(&rho1, &rho23, set)?,
    ))
}
