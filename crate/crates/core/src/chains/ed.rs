//! Exact diagonalization resolved by lattice momentum and a conserved charge
//! (total magnetization when it is conserved, spin-flip parity otherwise).

use std::f64::consts::PI;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::{bond_mask, diagonal_energy, site_bit, SparseHamiltonian, DENSE_MAX_L};
use super::{ChainSize, ModelSpec, ThermalPoint};
use crate::error::{Error, Result};
use crate::qmat::{partial_trace, DensityMatrix, Matrix};
use crate::teleport::PairCorrelators;

/// Ground-space degeneracy tolerance relative to the spectral width.
const DEGENERACY_REL_TOL: f64 = 1e-10;

/// One energy level with its site-averaged nearest-neighbour observables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub energy: f64,
    /// Number of degenerate copies represented by this entry.
    pub multiplicity: u32,
    pub z: f64,
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

/// Full spectrum of a finite chain, reusable for any temperature.
#[derive(Clone, Debug)]
pub struct ThermalSpectrum {
    l: usize,
    levels: Vec<Level>,
    e_min: f64,
    e_max: f64,
}

impl ThermalSpectrum {
    fn from_levels(l: usize, mut levels: Vec<Level>) -> Self {
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let e_min = levels.first().map_or(0.0, |x| x.energy);
        let e_max = levels.last().map_or(0.0, |x| x.energy);
        Self { l, levels, e_min, e_max }
    }

    pub fn num_sites(&self) -> usize {
        self.l
    }

    /// Levels in ascending energy.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of states, counting multiplicities.
    pub fn num_states(&self) -> usize {
        self.levels.iter().map(|x| x.multiplicity as usize).sum()
    }

    pub fn ground_energy(&self) -> f64 {
        self.e_min
    }

    /// All energies with multiplicity, ascending.
    pub fn energies(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|x| std::iter::repeat_n(x.energy, x.multiplicity as usize))
            .collect()
    }

    /// Boltzmann weights relative to the ground state; at `kt = 0` an equal
    /// mixture of the ground space.
    fn weights(&self, kt: f64) -> Vec<f64> {
        if kt == 0.0 {
            let tol = DEGENERACY_REL_TOL * (self.e_max - self.e_min);
            self.levels
                .iter()
                .map(|x| {
                    if x.energy - self.e_min <= tol {
                        x.multiplicity as f64
                    } else {
                        0.0
                    }
                })
                .collect()
        } else {
            self.levels
                .iter()
                .map(|x| x.multiplicity as f64 * (-(x.energy - self.e_min) / kt).exp())
                .collect()
        }
    }

    /// Thermal averages `[z, xx, yy, zz]` without physicality checks.
    pub fn averages(&self, kt: f64) -> [f64; 4] {
        let w = self.weights(kt);
        let total: f64 = w.iter().sum();
        let mut acc = [0.0; 4];
        for (x, &wi) in self.levels.iter().zip(&w) {
            acc[0] += wi * x.z;
            acc[1] += wi * x.xx;
            acc[2] += wi * x.yy;
            acc[3] += wi * x.zz;
        }
        acc.map(|a| a / total)
    }

    pub fn correlators(&self, kt: f64) -> Result<PairCorrelators> {
        if !(kt >= 0.0) {
            return Err(Error::InvalidArgument(format!("kT must be >= 0, got {kt}")));
        }
        let [z, xx, yy, zz] = self.averages(kt);
        PairCorrelators::new(z, xx, yy, zz)
    }

    /// `<H>` at temperature `kt`.
    pub fn mean_energy(&self, kt: f64) -> f64 {
        let w = self.weights(kt);
        let total: f64 = w.iter().sum();
        self.levels.iter().zip(&w).map(|(x, wi)| wi * x.energy).sum::<f64>() / total
    }

    /// `ln Z` at inverse temperature `beta`.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let s: f64 = self
            .levels
            .iter()
            .map(|x| x.multiplicity as f64 * (-beta * (x.energy - self.e_min)).exp())
            .sum();
        s.ln() - beta * self.e_min
    }
}

/// Translation by one site: site `j` moves to `j+1`.
#[inline]
fn translate(s: u32, l: usize) -> u32 {
    (s >> 1) | ((s & 1) << (l - 1))
}

/// Orbit data of every basis state: representative (smallest image), the
/// shift `d` with `T^d rep = s`, and the orbit period.
struct Orbits {
    rep: Vec<u32>,
    shift: Vec<u8>,
    period: Vec<u8>,
}

impl Orbits {
    fn new(l: usize) -> Self {
        let dim = 1usize << l;
        let mut rep = vec![u32::MAX; dim];
        let mut shift = vec![0u8; dim];
        let mut period = vec![0u8; dim];
        for s in 0..dim as u32 {
            if rep[s as usize] != u32::MAX {
                continue;
            }
            // s is the smallest member of its orbit since states are visited in order.
            let mut t = s;
            let mut d = 0usize;
            loop {
                rep[t as usize] = s;
                shift[t as usize] = d as u8;
                t = translate(t, l);
                d += 1;
                if t == s {
                    break;
                }
            }
            let mut t = s;
            for _ in 0..d {
                period[t as usize] = d as u8;
                t = translate(t, l);
            }
        }
        Self { rep, shift, period }
    }
}

#[derive(Clone, Copy)]
enum Charge {
    Magnetization(u32),
    Parity(u32),
}

impl Charge {
    fn contains(self, s: u32) -> bool {
        match self {
            Charge::Magnetization(n) => s.count_ones() == n,
            Charge::Parity(p) => s.count_ones() % 2 == p,
        }
    }
}

/// Off-diagonal connection from one representative to another.
#[derive(Clone, Copy)]
struct Link {
    from: u32,
    to: u32,
    shift: u8,
    h: f64,
    /// Transverse observable amplitudes per site: (same-bit flip, differing-bit flip).
    same: f64,
    diff: f64,
}

struct Sector {
    reps: Vec<u32>,
    links: Vec<Link>,
}

fn build_sector(model: &ModelSpec, l: usize, orbits: &Orbits, charge: Charge) -> Sector {
    let c = model.couplings();
    let inv_l = 1.0 / l as f64;
    let reps: Vec<u32> = (0..1u32 << l)
        .filter(|&s| orbits.rep[s as usize] == s && charge.contains(s))
        .collect();
    let mut links = Vec::new();
    for &r in &reps {
        for j in 0..l {
            let (bi, bj) = (site_bit(r, j, l), site_bit(r, (j + 1) % l, l));
            let t = r ^ bond_mask(j, l);
            if !charge.contains(t) {
                continue;
            }
            let (same, diff) = if bi == bj { (inv_l, 0.0) } else { (0.0, inv_l) };
            links.push(Link {
                from: r,
                to: orbits.rep[t as usize],
                shift: orbits.shift[t as usize],
                h: c.flip_amplitude(bi, bj),
                same,
                diff,
            });
        }
    }
    Sector { reps, links }
}

/// Eigen-decomposition of one momentum block, eigenvectors column-major.
struct BlockEigen {
    values: Vec<f64>,
    vectors: Vec<Complex64>,
}

fn diagonalize(dim: usize, h: &[Complex64]) -> Result<BlockEigen> {
    let real = h.iter().all(|x| x.im == 0.0);
    let mut vectors = vec![Complex64::new(0.0, 0.0); dim * dim];
    let values;
    if real {
        let a = Mat::<f64>::from_fn(dim, dim, |i, j| h[i * dim + j].re);
        let evd = a.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let u = evd.U();
        values = (0..dim).map(|i| s[i]).collect();
        for n in 0..dim {
            for i in 0..dim {
                vectors[n * dim + i] = Complex64::new(u[(i, n)], 0.0);
            }
        }
    } else {
        let a = Mat::<Complex64>::from_fn(dim, dim, |i, j| h[i * dim + j]);
        let evd = a.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let u = evd.U();
        values = (0..dim).map(|i| s[i].re).collect();
        for n in 0..dim {
            for i in 0..dim {
                vectors[n * dim + i] = u[(i, n)];
            }
        }
    }
    Ok(BlockEigen { values, vectors })
}

fn momentum_block(
    model: &ModelSpec,
    l: usize,
    orbits: &Orbits,
    sector: &Sector,
    m: usize,
) -> Result<Vec<Level>> {
    let c = model.couplings();
    let allowed: Vec<u32> = sector
        .reps
        .iter()
        .copied()
        .filter(|&r| (m * orbits.period[r as usize] as usize).is_multiple_of(l))
        .collect();
    let dim = allowed.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let index = |s: u32| allowed.binary_search(&s).ok();
    let k = 2.0 * PI * m as f64 / l as f64;
    let phase = |d: u8| {
        let arg = k * d as f64;
        // Exact values at multiples of pi/2 keep the m = 0, L/2 blocks real.
        match (m * d as usize * 4) % (4 * l) {
            0 => Complex64::new(1.0, 0.0),
            x if x == 2 * l => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(arg.cos(), arg.sin()),
        }
    };

    let mut h = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut diag_z = vec![0.0; dim];
    let mut diag_zz = vec![0.0; dim];
    for (a, &r) in allowed.iter().enumerate() {
        h[a * dim + a] += diagonal_energy(&c, r, l);
        let mut mz = 0.0;
        let mut mzz = 0.0;
        for j in 0..l {
            let zj = 1.0 - 2.0 * site_bit(r, j, l) as f64;
            let zk = 1.0 - 2.0 * site_bit(r, (j + 1) % l, l) as f64;
            mz += zj;
            mzz += zj * zk;
        }
        diag_z[a] = mz / l as f64;
        diag_zz[a] = mzz / l as f64;
    }
    // (row, col, same-coefficient, diff-coefficient) for the transverse observables.
    let mut obs: Vec<(usize, usize, Complex64, Complex64)> = Vec::new();
    for link in &sector.links {
        let (Some(a), Some(b)) = (index(link.from), index(link.to)) else {
            continue;
        };
        let ra = orbits.period[link.from as usize] as f64;
        let rb = orbits.period[link.to as usize] as f64;
        let coef = phase(link.shift) * (ra / rb).sqrt();
        if link.h != 0.0 {
            h[b * dim + a] += coef * link.h;
        }
        obs.push((b, a, coef * link.same, coef * link.diff));
    }

    let eig = diagonalize(dim, &h)?;
    drop(h);
    let weight = if m == 0 || 2 * m == l { 1 } else { 2 };
    let mut levels = Vec::with_capacity(dim);
    for n in 0..dim {
        let v = &eig.vectors[n * dim..(n + 1) * dim];
        let mut z = 0.0;
        let mut zz = 0.0;
        for a in 0..dim {
            let p = v[a].norm_sqr();
            z += p * diag_z[a];
            zz += p * diag_zz[a];
        }
        let mut same = Complex64::new(0.0, 0.0);
        let mut diff = Complex64::new(0.0, 0.0);
        for &(b, a, cs, cd) in &obs {
            let amp = v[b].conj() * v[a];
            same += amp * cs;
            diff += amp * cd;
        }
        levels.push(Level {
            energy: eig.values[n],
            multiplicity: weight,
            z,
            xx: same.re + diff.re,
            yy: diff.re - same.re,
            zz,
        });
    }
    Ok(levels)
}

/// Full spectrum with per-level observables for the model on `l` sites.
pub fn ed_spectrum(model: &ModelSpec, l: ChainSize) -> Result<ThermalSpectrum> {
    model.validate()?;
    spectrum_for(model, l.get())
}

pub(crate) fn spectrum_for(model: &ModelSpec, l: usize) -> Result<ThermalSpectrum> {
    let orbits = Orbits::new(l);
    let charges: Vec<Charge> = if model.conserves_magnetization() {
        (0..=l as u32).map(Charge::Magnetization).collect()
    } else {
        vec![Charge::Parity(0), Charge::Parity(1)]
    };
    let sectors: Vec<Sector> = charges
        .iter()
        .map(|&q| build_sector(model, l, &orbits, q))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..sectors.len())
        .flat_map(|q| (0..=l / 2).map(move |m| (q, m)))
        .collect();
    let blocks: Vec<Vec<Level>> = jobs
        .par_iter()
        .map(|&(q, m)| momentum_block(model, l, &orbits, &sectors[q], m))
        .collect::<Result<_>>()?;
    let levels: Vec<Level> = blocks.into_iter().flatten().collect();
    debug_assert_eq!(
        levels.iter().map(|x| x.multiplicity as usize).sum::<usize>(),
        1usize << l
    );
    Ok(ThermalSpectrum::from_levels(l, levels))
}

/// Thermal correlators of a finite periodic chain.
pub fn ed_correlators(point: &ThermalPoint, l: ChainSize) -> Result<PairCorrelators> {
    ed_spectrum(&point.model, l)?.correlators(point.kt)
}

/// Full thermal density matrix of a small chain, for site-resolved checks.
#[derive(Clone, Debug)]
pub struct DenseThermalState {
    l: usize,
    rho: Matrix,
    energies: Vec<f64>,
}

/// Thermal state from dense diagonalization of the full Hamiltonian.
pub fn dense_thermal_state(model: &ModelSpec, l: usize, kt: f64) -> Result<DenseThermalState> {
    if l > DENSE_MAX_L {
        return Err(Error::SizeLimit { what: "dense chain length", value: l, max: DENSE_MAX_L });
    }
    if !(kt >= 0.0) {
        return Err(Error::InvalidArgument(format!("kT must be >= 0, got {kt}")));
    }
    model.validate()?;
    let h = SparseHamiltonian::build(&model.couplings(), l)?.to_dense()?;
    let (energies, vectors) = h.hermitian_eigen()?;
    let e_min = energies[0];
    let width = energies[energies.len() - 1] - e_min;
    let w: Vec<f64> = energies
        .iter()
        .map(|&e| {
            if kt == 0.0 {
                if e - e_min <= DEGENERACY_REL_TOL * width {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-(e - e_min) / kt).exp()
            }
        })
        .collect();
    let total: f64 = w.iter().sum();
    let dim = h.dim();
    let rho = Matrix::from_fn(dim, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &wn) in w.iter().enumerate() {
            if wn != 0.0 {
                acc += vectors[(i, n)] * vectors[(j, n)].conj() * wn;
            }
        }
        acc / total
    });
    Ok(DenseThermalState { l, rho, energies })
}

impl DenseThermalState {
    pub fn density(&self) -> &Matrix {
        &self.rho
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `[z_j, xx, yy, zz]` on site `j` and bond `(j, j+1)`.
    pub fn site_correlators(&self, j: usize) -> [f64; 4] {
        let l = self.l;
        let k = (j + 1) % l;
        let mask = bond_mask(j, l);
        let mut out = [0.0; 4];
        for s in 0..(1u32 << l) {
            let (bj, bk) = (site_bit(s, j, l), site_bit(s, k, l));
            let p = self.rho[(s as usize, s as usize)].re;
            let zj = 1.0 - 2.0 * bj as f64;
            let zk = 1.0 - 2.0 * bk as f64;
            out[0] += p * zj;
            out[3] += p * zj * zk;
            let off = self.rho[(s as usize, (s ^ mask) as usize)].re;
            out[1] += off;
            out[2] += if bj != bk { off } else { -off };
        }
        out
    }

    /// Reduced state of sites `j` and `j+1` for `j + 1 < L`.
    pub fn two_site_density(&self, j: usize) -> Result<DensityMatrix> {
        if j + 1 >= self.l {
            return Err(Error::InvalidArgument(format!(
                "two-site state needs j + 1 < L, got j = {j}"
            )));
        }
        let rho = DensityMatrix::from_unnormalized(&self.rho)?;
        partial_trace(&rho, &[j, j + 1], &vec![2; self.l])
    }
}
