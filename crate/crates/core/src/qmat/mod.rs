//! Dense complex-matrix toolkit for few-qubit states.
//!
//! Basis convention: `|0>` is spin up (`sigma^z = +1`), `|1>` spin down. In a
//! tensor product the first factor is the most significant index, so for the
//! three teleportation qubits the basis state `|q1 q2 q3>` has index
//! `4*q1 + 2*q2 + q3`, with Alice's input qubit as factor 0.

mod density;
mod matrix;
mod measures;

use std::fmt;

use num_complex::Complex64;

pub use density::{DensityMatrix, HERMITIAN_TOL, MAX_DIM, PSD_TOL, TRACE_TOL};
pub use matrix::Matrix;
pub use measures::{bloch_vector, trace_distance, trace_distance_bloch, uhlmann_fidelity};

use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
    ];

    /// `Psi` states have antiparallel spins, `Phi` states parallel ones.
    pub fn is_psi(self) -> bool {
        matches!(self, BellLabel::PsiPlus | BellLabel::PsiMinus)
    }

    /// State vector in the two-qubit computational basis.
    pub fn state(self) -> [Complex64; 4] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellLabel::PsiPlus => [C0, h, h, C0],
            BellLabel::PsiMinus => [C0, h, -h, C0],
            BellLabel::PhiPlus => [h, C0, C0, h],
            BellLabel::PhiMinus => [h, C0, C0, -h],
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
        })
    }
}

/// The 2x2 Pauli matrix (or identity) for `axis`.
pub fn pauli(axis: PauliLabel) -> Matrix {
    let mut m = Matrix::zeros(2);
    match axis {
        PauliLabel::I => {
            m[(0, 0)] = C1;
            m[(1, 1)] = C1;
        }
        PauliLabel::X => {
            m[(0, 1)] = C1;
            m[(1, 0)] = C1;
        }
        PauliLabel::Y => {
            m[(0, 1)] = -CI;
            m[(1, 0)] = CI;
        }
        PauliLabel::Z => {
            m[(0, 0)] = C1;
            m[(1, 1)] = -C1;
        }
    }
    m
}

/// Rank-one projector onto the Bell state `j`.
pub fn bell_projector(j: BellLabel) -> DensityMatrix {
    let psi = j.state();
    DensityMatrix::new(Matrix::outer(&psi, &psi)).expect("Bell projector is a valid state")
}

/// Tensor product of two states; `a` becomes the most significant factor.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let dim = a.dim().saturating_mul(b.dim());
    if dim > MAX_DIM {
        return Err(Error::SizeLimit {
            what: "tensor product dimension",
            value: dim,
            max: MAX_DIM,
        });
    }
    DensityMatrix::new(a.matrix().kron(b.matrix()))
}

/// Partial trace of an arbitrary square matrix over every factor not in `keep`.
///
/// `dims` lists the factor dimensions, most significant first. Kept factors
/// appear in the result in ascending order.
pub fn partial_trace_matrix(m: &Matrix, keep: &[usize], dims: &[usize]) -> Result<Matrix> {
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "factor dimensions {dims:?} multiply to {total}, matrix has {}",
            m.dim()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::InvalidArgument("nothing to keep in partial trace".into()));
    }
    if let Some(&bad) = kept.iter().find(|&&f| f >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "factor {bad} out of range for {} factors",
            dims.len()
        )));
    }

    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !kept.contains(f)).collect();
    let strides = &strides;
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &f in factors {
            out = out
                .iter()
                .flat_map(|&base| (0..dims[f]).map(move |d| base + d * strides[f]))
                .collect();
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let n = kept_off.len();
    let mut out = Matrix::zeros(n);
    for (a, &ka) in kept_off.iter().enumerate() {
        for (b, &kb) in kept_off.iter().enumerate() {
            out[(a, b)] = traced_off.iter().map(|&t| m[(ka + t, kb + t)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density matrix on the factors in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho.matrix(), keep, dims)?;
    DensityMatrix::new(reduced.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn random_state(dim: usize, seed: &[f64]) -> DensityMatrix {
        // A A† / Tr(A A†) from the given entries.
        let a = Matrix::from_fn(dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        });
        let p = &a * &a.adjoint();
        DensityMatrix::from_unnormalized(&p).unwrap()
    }

    #[test]
    fn pauli_basics() {
        let z = pauli(PauliLabel::Z);
        assert_eq!(z, Matrix::from_real_diag(&[1.0, -1.0]));
        let x = pauli(PauliLabel::X);
        assert_eq!(&x * &x, Matrix::identity(2));
        assert_eq!(pauli(PauliLabel::Y).trace(), C0);
        for axis in [PauliLabel::X, PauliLabel::Y, PauliLabel::Z] {
            let p = pauli(axis);
            assert_eq!(&p * &p.adjoint(), Matrix::identity(2));
            assert_eq!(p.hermiticity_error(), 0.0);
        }
    }

    #[test]
    fn bell_projectors() {
        let phi = bell_projector(BellLabel::PhiPlus);
        let m = phi.matrix();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(m[(i, j)].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(m[(1, 1)].norm(), 0.0);

        let mut sum = Matrix::zeros(4);
        for j in BellLabel::ALL {
            let p = bell_projector(j);
            sum = &sum + p.matrix();
            let sq = p.matrix() * p.matrix();
            assert!(sq.max_abs_diff(p.matrix()) < 1e-15, "{j} not idempotent");
        }
        assert!(sum.max_abs_diff(&Matrix::identity(4)) < 1e-15);

        let prod = bell_projector(BellLabel::PsiMinus).matrix() * bell_projector(BellLabel::PsiPlus).matrix();
        assert!(prod.max_abs_diff(&Matrix::zeros(4)) < 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        let t = tensor(&half, &half).unwrap();
        assert!(t.matrix().max_abs_diff(&Matrix::identity(4).scale_real(0.25)) < 1e-15);

        let up = DensityMatrix::from_real_diag(&[1.0, 0.0]).unwrap();
        let t = tensor(&up, &up).unwrap();
        assert_eq!(t.matrix(), &Matrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_size_limit() {
        // 2^9 x 2^8 exceeds 2^16 without materializing the product.
        let big = DensityMatrix::maximally_mixed(1 << 9).unwrap();
        let other = DensityMatrix::maximally_mixed(1 << 8).unwrap();
        assert!(matches!(tensor(&big, &other), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn partial_trace_examples() {
        let a = DensityMatrix::from_real_diag(&[0.75, 0.25]).unwrap();
        let b = random_state(2, &[0.3, -0.1, 0.7, 0.2, 0.5, 0.9, -0.4, 0.1]);
        let ab = tensor(&a, &b).unwrap();
        let back = partial_trace(&ab, &[0], &[2, 2]).unwrap();
        assert!(back.matrix().max_abs_diff(a.matrix()) < 1e-14);
        let back = partial_trace(&ab, &[1], &[2, 2]).unwrap();
        assert!(back.matrix().max_abs_diff(b.matrix()) < 1e-14);

        let phi = bell_projector(BellLabel::PhiPlus);
        for keep in [0, 1] {
            let r = partial_trace(&phi, &[keep], &[2, 2]).unwrap();
            assert!(r.matrix().max_abs_diff(&Matrix::identity(2).scale_real(0.5)) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_x_state() {
        // Tracing the second qubit of the X-shaped pair state leaves diag(a+b, b+d).
        let (a, b, c, d, e) = (0.4, 0.15, 0.1, 0.3, -0.05);
        let rows = [
            a, 0.0, 0.0, e, //
            0.0, b, c, 0.0, //
            0.0, c, b, 0.0, //
            e, 0.0, 0.0, d,
        ];
        let m = Matrix::from_real_rows(4, &rows).unwrap();
        let r = partial_trace_matrix(&m, &[0], &[2, 2]).unwrap();
        assert!(r.max_abs_diff(&Matrix::from_real_diag(&[a + b, b + d])) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = Matrix::identity(8).scale_real(0.125);
        assert!(matches!(
            partial_trace_matrix(&m, &[0], &[2, 2]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(partial_trace_matrix(&m, &[], &[2, 2, 2]).is_err());
        assert!(partial_trace_matrix(&m, &[3], &[2, 2, 2]).is_err());
    }

    #[test]
    fn partial_trace_three_factors_middle() {
        let a = DensityMatrix::from_real_diag(&[0.9, 0.1]).unwrap();
        let b = random_state(2, &[0.1, 0.2, 0.3, -0.4, 0.5, 0.6, 0.7, 0.8]);
        let c = DensityMatrix::from_real_diag(&[0.2, 0.8]).unwrap();
        let abc = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let mid = partial_trace(&abc, &[1], &[2, 2, 2]).unwrap();
        assert!(mid.matrix().max_abs_diff(b.matrix()) < 1e-14);
        let ac = partial_trace(&abc, &[2, 0], &[2, 2, 2]).unwrap();
        assert!(ac.matrix().max_abs_diff(tensor(&a, &c).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let up = DensityMatrix::from_real_diag(&[1.0, 0.0]).unwrap();
        let down = DensityMatrix::from_real_diag(&[0.0, 1.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(uhlmann_fidelity(&up, &down).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(uhlmann_fidelity(&up, &mixed).unwrap(), 0.5, epsilon = 1e-12);
        let r = random_state(4, &[0.3, 0.1, -0.7, 0.2, 0.5, 0.9, 0.4, -0.1, 0.6]);
        assert_abs_diff_eq!(uhlmann_fidelity(&r, &r).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn trace_distance_examples() {
        let up = DensityMatrix::from_real_diag(&[1.0, 0.0]).unwrap();
        let down = DensityMatrix::from_real_diag(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(trace_distance(&up, &down).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_distance(&up, &up).unwrap(), 0.0, epsilon = 1e-14);
        let p = DensityMatrix::from_real_diag(&[0.75, 0.25]).unwrap();
        let q = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(trace_distance(&p, &q).unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(DensityMatrix::from_real_diag(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_real_diag(&[1.2, -0.2]).is_err());
        assert!(DensityMatrix::from_real_diag(&[0.5, 0.25, 0.25]).is_err());
        let mut m = Matrix::identity(2).scale_real(0.5);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    fn qubit_from_bloch(r: [f64; 3]) -> DensityMatrix {
        let m = Matrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(0.5 * (1.0 + r[2]), 0.0),
            (1, 1) => Complex64::new(0.5 * (1.0 - r[2]), 0.0),
            (0, 1) => Complex64::new(0.5 * r[0], -0.5 * r[1]),
            _ => Complex64::new(0.5 * r[0], 0.5 * r[1]),
        });
        DensityMatrix::new(m).unwrap()
    }

    fn bloch_ball() -> impl Strategy<Value = [f64; 3]> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, z, r)| {
            let n = (x * x + y * y + z * z).sqrt().max(1e-12);
            [r * x / n, r * y / n, r * z / n]
        })
    }

    proptest! {
        #[test]
        fn bloch_trace_distance_identity(a in bloch_ball(), b in bloch_ball()) {
            let (r1, r2) = (qubit_from_bloch(a), qubit_from_bloch(b));
            let eig = trace_distance(&r1, &r2).unwrap();
            let geo = trace_distance_bloch(&r1, &r2).unwrap();
            prop_assert!((eig - geo).abs() < 1e-12);
        }

        #[test]
        fn fuchs_van_de_graaf(a in bloch_ball(), b in bloch_ball()) {
            let (r1, r2) = (qubit_from_bloch(a), qubit_from_bloch(b));
            let f = uhlmann_fidelity(&r1, &r2).unwrap();
            let d = trace_distance(&r1, &r2).unwrap();
            prop_assert!(1.0 - f <= d + 1e-9);
            prop_assert!(d <= (1.0 - f).max(0.0).sqrt() + 1e-9);
            let g = uhlmann_fidelity(&r2, &r1).unwrap();
            prop_assert!((f - g).abs() < 1e-9);
        }

        #[test]
        fn tensor_then_trace_recovers_factor(
            a in bloch_ball(),
            seed in proptest::collection::vec(-1.0..1.0f64, 8),
        ) {
            let ra = qubit_from_bloch(a);
            let rb = random_state(2, &seed);
            let ab = tensor(&ra, &rb).unwrap();
            prop_assert!((ab.matrix().trace().re - 1.0).abs() < 1e-12);
            let back = partial_trace(&ab, &[0], &[2, 2]).unwrap();
            prop_assert!(back.matrix().max_abs_diff(ra.matrix()) < 1e-12);
        }
    }
}
