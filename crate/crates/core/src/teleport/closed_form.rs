//! Analytic efficiency measures for a diagonal input spin and an X-shaped
//! resource pair. They depend on `z` and `zz` only; `xx` and `yy` drop out.

use super::{PairCorrelators, SetFamily};
use crate::error::{Error, Result};
use crate::qmat::{BellLabel, DensityMatrix};

/// `f(zz, z) = 1 + z + z^2 + z*zz`
#[inline]
pub fn f_aux(zz: f64, z: f64) -> f64 {
    1.0 + z + z * z + z * zz
}

/// `g(zz, z) = 1 - z - z^2 + z*zz`
#[inline]
pub fn g_aux(zz: f64, z: f64) -> f64 {
    1.0 - z - z * z + z * zz
}

#[inline]
fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// Probability of each `Psi` outcome, `(1 - z^2)/4`.
pub fn psi_probability(z: f64) -> f64 {
    (1.0 - z * z) / 4.0
}

/// Probability of each `Phi` outcome, `(1 + z^2)/4`.
pub fn phi_probability(z: f64) -> f64 {
    (1.0 + z * z) / 4.0
}

/// Mean fidelity of the thermal protocol with the given correction family.
pub fn mean_fidelity(c: &PairCorrelators, family: SetFamily) -> f64 {
    let (z, zz) = (c.z(), c.zz());
    let (fp, fm) = (f_aux(zz, z), f_aux(zz, -z));
    let (gp, gm) = (g_aux(zz, z), g_aux(zz, -z));
    let sq = |x: f64| x * x;
    match family {
        SetFamily::Psi => {
            sq(sqrt0((1.0 + z) * fm) + sqrt0((1.0 - z) * fp)) / 8.0
                + sq(sqrt0((1.0 - z) * gp) + sqrt0((1.0 + z) * gm)) / 8.0
        }
        SetFamily::Phi => {
            sq(sqrt0((1.0 - z) * fm) + sqrt0((1.0 + z) * fp)) / 8.0
                + sq(sqrt0((1.0 + z) * gp) + sqrt0((1.0 - z) * gm)) / 8.0
        }
    }
}

/// Mean trace distance of the thermal protocol with the given correction family.
pub fn mean_trace_distance(c: &PairCorrelators, family: SetFamily) -> f64 {
    let (z, zz) = (c.z(), c.zz());
    let cubic = (z * z * z - z * zz).abs();
    match family {
        SetFamily::Psi => ((2.0 + z * z + zz) * z.abs() + cubic) / 4.0,
        SetFamily::Phi => ((2.0 - z * z - zz) * z.abs() + cubic) / 4.0,
    }
}

/// An optimized efficiency together with the family attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub family: SetFamily,
}

/// Maximum mean fidelity over the correction families. Ties go to `Phi`.
pub fn f_max(c: &PairCorrelators) -> Extremum {
    let phi = mean_fidelity(c, SetFamily::Phi);
    let psi = mean_fidelity(c, SetFamily::Psi);
    if phi >= psi {
        Extremum { value: phi, family: SetFamily::Phi }
    } else {
        Extremum { value: psi, family: SetFamily::Psi }
    }
}

/// Minimum mean trace distance over the correction families. Ties go to `Phi`.
pub fn d_min(c: &PairCorrelators) -> Extremum {
    let phi = mean_trace_distance(c, SetFamily::Phi);
    let psi = mean_trace_distance(c, SetFamily::Psi);
    if phi <= psi {
        Extremum { value: phi, family: SetFamily::Phi }
    } else {
        Extremum { value: psi, family: SetFamily::Psi }
    }
}

/// The minimum mean trace distance written as one expression,
/// `[(2 - |z^2 + zz|)|z| + |z^3 - z*zz|] / 4`.
pub fn d_min_single_expression(c: &PairCorrelators) -> f64 {
    let (z, zz) = (c.z(), c.zz());
    ((2.0 - (z * z + zz).abs()) * z.abs() + (z * z * z - z * zz).abs()) / 4.0
}

/// Bob's corrected qubit for outcome `j` and correction family `family`.
///
/// Fails for `Psi` outcomes at `|z| = 1`, which occur with zero probability.
pub fn bob_output_closed_form(
    c: &PairCorrelators,
    j: BellLabel,
    family: SetFamily,
) -> Result<DensityMatrix> {
    let (z, zz) = (c.z(), c.zz());
    let diag = if j.is_psi() {
        let norm = 2.0 * (1.0 - z * z);
        if norm <= 0.0 {
            return Err(Error::Degenerate(format!(
                "outcome {j} has zero probability at z = {z}"
            )));
        }
        let (hi, lo) = match family {
            SetFamily::Psi => (g_aux(zz, -z), g_aux(zz, z)),
            SetFamily::Phi => (g_aux(zz, z), g_aux(zz, -z)),
        };
        [hi / norm, lo / norm]
    } else {
        let norm = 2.0 * (1.0 + z * z);
        let (hi, lo) = match family {
            SetFamily::Psi => (f_aux(zz, -z), f_aux(zz, z)),
            SetFamily::Phi => (f_aux(zz, z), f_aux(zz, -z)),
        };
        [hi / norm, lo / norm]
    };
    DensityMatrix::from_real_diag(&[diag[0].max(0.0), diag[1].max(0.0)])
        .map_err(|e| Error::Unphysical(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Sign with values inside `[-tol, tol]` counted as zero.
    pub fn of(x: f64, tol: f64) -> Sign {
        if x > tol {
            Sign::Positive
        } else if x < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Which simplified expression gives the minimum mean trace distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DminBranch {
    /// `z = 0`: the value is zero.
    Unpolarized,
    /// `zz <= z^2` and `zz >= -z^2`: `|z|(1 - zz)/2` (Phi family).
    PhiBelowSquare,
    /// `zz >= z^2`: `|z|(1 - z^2)/2` (Phi family).
    PhiAboveSquare,
    /// `zz <= -z^2`: `|z|(1 + z^2)/2` (Psi family).
    Psi,
}

impl DminBranch {
    pub fn evaluate(self, c: &PairCorrelators) -> f64 {
        let (z, zz) = (c.z().abs(), c.zz());
        match self {
            DminBranch::Unpolarized => 0.0,
            DminBranch::PhiBelowSquare => z * (1.0 - zz) / 2.0,
            DminBranch::PhiAboveSquare => z * (1.0 - z * z) / 2.0,
            DminBranch::Psi => z * (1.0 + z * z) / 2.0,
        }
    }

    pub fn family(self) -> SetFamily {
        match self {
            DminBranch::Psi => SetFamily::Psi,
            _ => SetFamily::Phi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignAnalysis {
    /// Sign of `z^3 - z*zz`.
    pub cubic: Sign,
    pub z: Sign,
    pub branch: DminBranch,
}

const SIGN_TOL: f64 = 1e-14;

/// Classifies the correlators by the signs entering the minimum mean trace
/// distance and picks the matching simplified branch.
pub fn sign_analysis(c: &PairCorrelators) -> SignAnalysis {
    let (z, zz) = (c.z(), c.zz());
    let cubic = Sign::of(z * z * z - z * zz, SIGN_TOL);
    let z_sign = Sign::of(z, 0.0);
    let branch = if z_sign == Sign::Zero {
        DminBranch::Unpolarized
    } else if z * z + zz <= 0.0 {
        DminBranch::Psi
    } else if zz <= z * z {
        DminBranch::PhiBelowSquare
    } else {
        DminBranch::PhiAboveSquare
    };
    SignAnalysis { cubic, z: z_sign, branch }
}

/// Piecewise forms of the minimum mean trace distance for the transverse-field
/// XY family on `0 <= lambda <= 2`, where `z > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SimplifiedCase {
    /// `gamma = 0`: `z^3 - z*zz >= 0`, the minimizing family switches at `zz = -z^2`.
    XxTransverse,
    /// `gamma = 0.5`: always the Phi family, `z^3 - z*zz` switches sign at `zz = z^2`.
    XyHalf,
    /// `gamma = 1`: Phi family with `z^3 - z*zz <= 0` throughout.
    IsingTransverse,
}

impl SimplifiedCase {
    pub fn for_gamma(gamma: f64) -> Option<Self> {
        if gamma == 0.0 {
            Some(SimplifiedCase::XxTransverse)
        } else if gamma == 0.5 {
            Some(SimplifiedCase::XyHalf)
        } else if gamma.abs() == 1.0 {
            Some(SimplifiedCase::IsingTransverse)
        } else {
            None
        }
    }
}

/// Evaluates the case's piecewise expression and reports the branch used.
pub fn simplified_dmin(case: SimplifiedCase, c: &PairCorrelators) -> (f64, DminBranch) {
    let (z, zz) = (c.z(), c.zz());
    match case {
        SimplifiedCase::XxTransverse => {
            if zz >= -z * z {
                (z * (1.0 - zz) / 2.0, DminBranch::PhiBelowSquare)
            } else {
                (z * (1.0 + z * z) / 2.0, DminBranch::Psi)
            }
        }
        SimplifiedCase::XyHalf => {
            if zz >= z * z {
                (z * (1.0 - z * z) / 2.0, DminBranch::PhiAboveSquare)
            } else {
                (z * (1.0 - zz) / 2.0, DminBranch::PhiBelowSquare)
            }
        }
        SimplifiedCase::IsingTransverse => (z * (1.0 - z * z) / 2.0, DminBranch::PhiAboveSquare),
    }
}
