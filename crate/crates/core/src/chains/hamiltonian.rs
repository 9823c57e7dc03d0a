use num_complex::Complex64;

use super::{ChainSize, ModelSpec};
use crate::error::{Error, Result};
use crate::qmat::Matrix;

/// Largest chain length for which a dense `2^L x 2^L` matrix is built.
pub const DENSE_MAX_L: usize = 12;

/// Nearest-neighbour couplings in the Pauli form
/// `sum_j [jxx sx sx + jyy sy sy + jzz sz sz] - hz sum_j sz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BondCouplings {
    pub jxx: f64,
    pub jyy: f64,
    pub jzz: f64,
    pub hz: f64,
}

impl BondCouplings {
    /// Amplitude of flipping both spins of a bond whose bits are `bi`, `bj`.
    #[inline]
    pub(crate) fn flip_amplitude(&self, bi: u32, bj: u32) -> f64 {
        if bi != bj {
            self.jxx + self.jyy
        } else {
            self.jxx - self.jyy
        }
    }
}

/// Bit of site `j` in basis index `s` of an `l`-site chain.
#[inline]
pub(crate) fn site_bit(s: u32, j: usize, l: usize) -> u32 {
    (s >> (l - 1 - j)) & 1
}

/// Mask with the bits of sites `j` and `j+1 mod l` set.
#[inline]
pub(crate) fn bond_mask(j: usize, l: usize) -> u32 {
    (1u32 << (l - 1 - j)) | (1u32 << (l - 1 - (j + 1) % l))
}

/// Diagonal energy of basis state `s`.
pub(crate) fn diagonal_energy(c: &BondCouplings, s: u32, l: usize) -> f64 {
    let mut e = 0.0;
    for j in 0..l {
        let zj = 1.0 - 2.0 * site_bit(s, j, l) as f64;
        let zk = 1.0 - 2.0 * site_bit(s, (j + 1) % l, l) as f64;
        e += c.jzz * zj * zk - c.hz * zj;
    }
    e
}

/// Hamiltonian in the computational basis as a diagonal plus off-diagonal
/// triplets `(row, col, value)`.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    l: usize,
    diag: Vec<f64>,
    off: Vec<(u32, u32, f64)>,
}

impl SparseHamiltonian {
    /// Builds the periodic chain for any `l >= 2`. At `l = 2` the wrap bond
    /// doubles the single physical bond.
    pub(crate) fn build(c: &BondCouplings, l: usize) -> Result<Self> {
        if !(2..=super::HARD_MAX_L).contains(&l) {
            return Err(Error::SizeLimit { what: "chain length", value: l, max: super::HARD_MAX_L });
        }
        let dim = 1u32 << l;
        let mut diag = Vec::with_capacity(dim as usize);
        let mut off = Vec::new();
        for s in 0..dim {
            diag.push(diagonal_energy(c, s, l));
            for j in 0..l {
                let amp = c.flip_amplitude(site_bit(s, j, l), site_bit(s, (j + 1) % l, l));
                if amp != 0.0 {
                    off.push((s ^ bond_mask(j, l), s, amp));
                }
            }
        }
        Ok(Self { l, diag, off })
    }

    pub fn num_sites(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[(u32, u32, f64)] {
        &self.off
    }

    /// Dense matrix, available up to [`DENSE_MAX_L`] sites.
    pub fn to_dense(&self) -> Result<Matrix> {
        if self.l > DENSE_MAX_L {
            return Err(Error::SizeLimit { what: "dense chain length", value: self.l, max: DENSE_MAX_L });
        }
        let mut m = Matrix::zeros(self.dim());
        for (i, &d) in self.diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        for &(r, c, v) in &self.off {
            m[(r as usize, c as usize)] += Complex64::new(v, 0.0);
        }
        Ok(m)
    }
}

/// The model Hamiltonian on `l` periodic sites.
pub fn hamiltonian_matrix(model: &ModelSpec, l: ChainSize) -> Result<SparseHamiltonian> {
    model.validate()?;
    SparseHamiltonian::build(&model.couplings(), l.get())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{pauli, PauliLabel};

    fn total_sz(l: usize) -> Matrix {
        let id = Matrix::identity(2);
        let z = pauli(PauliLabel::Z);
        let mut out = Matrix::zeros(1 << l);
        for j in 0..l {
            let mut op = Matrix::identity(1);
            for k in 0..l {
                op = op.kron(if k == j { &z } else { &id });
            }
            out = &out + &op;
        }
        out
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn heisenberg_two_sites() {
        let c = ModelSpec::Xxz { delta: 1.0, h: 0.0 }.couplings();
        let h = SparseHamiltonian::build(&c, 2).unwrap().to_dense().unwrap();
        let ev = sorted(h.hermitian_eigenvalues().unwrap());
        for (a, b) in ev.iter().zip([-6.0, 2.0, 2.0, 2.0]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn decoupled_xy_spins() {
        let m = ModelSpec::xy(0.0, 0.7).unwrap();
        let h = hamiltonian_matrix(&m, ChainSize::new(4).unwrap()).unwrap();
        assert!(h.off_diagonal().is_empty());
        let ev = sorted(h.diagonal().to_vec());
        let mut levels: Vec<f64> = ev.clone();
        levels.dedup();
        assert_eq!(levels, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn dense_matches_kron_construction() {
        let l = 4;
        let m = ModelSpec::xy(0.8, 0.3).unwrap();
        let c = m.couplings();
        let h = hamiltonian_matrix(&m, ChainSize::new(l).unwrap()).unwrap().to_dense().unwrap();
        let id = Matrix::identity(2);
        let site_op = |ops: &[(usize, &Matrix)]| {
            let mut out = Matrix::identity(1);
            for k in 0..l {
                let f = ops.iter().find(|(j, _)| *j == k).map(|(_, o)| *o).unwrap_or(&id);
                out = out.kron(f);
            }
            out
        };
        let (x, y, z) = (pauli(PauliLabel::X), pauli(PauliLabel::Y), pauli(PauliLabel::Z));
        let mut expect = Matrix::zeros(1 << l);
        for j in 0..l {
            let k = (j + 1) % l;
            expect = &expect + &site_op(&[(j, &x), (k, &x)]).scale_real(c.jxx);
            expect = &expect + &site_op(&[(j, &y), (k, &y)]).scale_real(c.jyy);
            expect = &expect + &site_op(&[(j, &z), (k, &z)]).scale_real(c.jzz);
            expect = &expect - &site_op(&[(j, &z)]).scale_real(c.hz);
        }
        assert!(h.max_abs_diff(&expect) < 1e-14);
        assert!(h.hermiticity_error() < 1e-15);
    }

    #[test]
    fn xxz_conserves_magnetization() {
        let m = ModelSpec::xxz(1.7, 3.0).unwrap();
        let h = hamiltonian_matrix(&m, ChainSize::new(6).unwrap()).unwrap().to_dense().unwrap();
        let comm = h.commutator(&total_sz(6));
        assert!(comm.as_slice().iter().all(|x| x.norm() < 1e-13));

        let m = ModelSpec::xy(1.0, 0.5).unwrap();
        let h = hamiltonian_matrix(&m, ChainSize::new(4).unwrap()).unwrap().to_dense().unwrap();
        assert!(h.commutator(&total_sz(4)).as_slice().iter().any(|x| x.norm() > 0.1));
    }

    #[test]
    fn dense_size_limit() {
        let m = ModelSpec::xy(1.0, 0.0).unwrap();
        let h = hamiltonian_matrix(&m, ChainSize::new(14).unwrap()).unwrap();
        assert_eq!(h.dim(), 1 << 14);
        assert!(matches!(h.to_dense(), Err(Error::SizeLimit { .. })));
    }
}
