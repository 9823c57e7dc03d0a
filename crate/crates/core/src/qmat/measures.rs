use super::{pauli, DensityMatrix, PauliLabel};
use crate::error::{Error, Result};

fn same_dim(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<()> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            r1.dim(),
            r2.dim()
        )));
    }
    Ok(())
}

/// Uhlmann fidelity in its squared form, `[Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2`.
pub fn uhlmann_fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    same_dim(r1, r2)?;
    let s = r1.sqrt()?;
    let inner = &(&s * r2.matrix()) * &s;
    let root_trace: f64 = inner
        .hermitian_part()
        .hermitian_eigenvalues()?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Trace distance `Tr|r1 - r2| / 2` from the spectrum of the difference.
pub fn trace_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    same_dim(r1, r2)?;
    let diff = r1.matrix() - r2.matrix();
    let sum_abs: f64 = diff
        .hermitian_part()
        .hermitian_eigenvalues()?
        .into_iter()
        .map(f64::abs)
        .sum();
    Ok((0.5 * sum_abs).clamp(0.0, 1.0))
}

/// Bloch vector `(Tr(rho sx), Tr(rho sy), Tr(rho sz))` of a qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vector needs a qubit, got dimension {}",
            rho.dim()
        )));
    }
    let comp = |axis| (rho.matrix() * &pauli(axis)).trace().re;
    Ok([
        comp(PauliLabel::X),
        comp(PauliLabel::Y),
        comp(PauliLabel::Z),
    ])
}

/// Qubit trace distance as half the Euclidean distance of Bloch vectors.
pub fn trace_distance_bloch(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    let a = bloch_vector(r1)?;
    let b = bloch_vector(r2)?;
    let d2: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(0.5 * d2.sqrt())
}
