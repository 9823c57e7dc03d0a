//! The internal teleportation protocol and its efficiency measures.
//!
//! Qubit 1 (Alice's input) and the resource pair 2–3 are three adjacent spins
//! of the same thermal chain. Everything the protocol needs is fixed by the
//! pair correlators `z = <s^z>`, `xx`, `yy` and `zz` of [`PairCorrelators`].
//!
//! [`engine`] runs the protocol by brute force on arbitrary states;
//! [`closed_form`] holds the analytic mean fidelity, mean trace distance and
//! Bob's output states for the thermal (diagonal input, X-shaped resource)
//! case. The two routes are checked against each other in the tests.

pub mod closed_form;
pub mod engine;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{pauli, BellLabel, DensityMatrix, Matrix, PauliLabel};

pub use closed_form::{
    bob_output_closed_form, d_min, d_min_single_expression, f_max, mean_fidelity,
    mean_trace_distance, sign_analysis, simplified_dmin, DminBranch, Extremum, Sign,
    SignAnalysis, SimplifiedCase,
};
pub use engine::{
    engine_efficiency, engine_mean_fidelity, engine_mean_trace_distance, teleport_engine,
    TeleportOutcome, DEGENERATE_PROBABILITY,
};

/// Slack used when checking that correlators describe a physical pair state.
pub const CORRELATOR_TOL: f64 = 1e-10;

/// Bob's correction table for an assumed Bell-state resource `|k>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrectionSet {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Correction sets that give identical efficiencies for thermal pair states
/// are grouped: `S_{Psi+}` with `S_{Psi-}` and `S_{Phi+}` with `S_{Phi-}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetFamily {
    Psi,
    Phi,
}

impl CorrectionSet {
    pub const ALL: [CorrectionSet; 4] = [
        CorrectionSet::PhiPlus,
        CorrectionSet::PhiMinus,
        CorrectionSet::PsiPlus,
        CorrectionSet::PsiMinus,
    ];

    pub fn family(self) -> SetFamily {
        match self {
            CorrectionSet::PhiPlus | CorrectionSet::PhiMinus => SetFamily::Phi,
            CorrectionSet::PsiPlus | CorrectionSet::PsiMinus => SetFamily::Psi,
        }
    }

    /// The resource Bell state this table corrects for.
    pub fn resource(self) -> BellLabel {
        match self {
            CorrectionSet::PhiPlus => BellLabel::PhiPlus,
            CorrectionSet::PhiMinus => BellLabel::PhiMinus,
            CorrectionSet::PsiPlus => BellLabel::PsiPlus,
            CorrectionSet::PsiMinus => BellLabel::PsiMinus,
        }
    }

    /// Unitary Bob applies after Alice reports outcome `j`.
    pub fn unitary(self, j: BellLabel) -> Matrix {
        use BellLabel::*;
        use CorrectionSet as S;
        let zx = || &pauli(PauliLabel::Z) * &pauli(PauliLabel::X);
        let p = pauli;
        match (self, j) {
            (S::PhiPlus, PhiPlus) => p(PauliLabel::I),
            (S::PhiPlus, PhiMinus) => p(PauliLabel::Z),
            (S::PhiPlus, PsiPlus) => p(PauliLabel::X),
            (S::PhiPlus, PsiMinus) => zx(),

            (S::PhiMinus, PhiPlus) => p(PauliLabel::Z),
            (S::PhiMinus, PhiMinus) => p(PauliLabel::I),
            (S::PhiMinus, PsiPlus) => zx(),
            (S::PhiMinus, PsiMinus) => p(PauliLabel::X),

            (S::PsiPlus, PhiPlus) => p(PauliLabel::X),
            (S::PsiPlus, PhiMinus) => zx(),
            (S::PsiPlus, PsiPlus) => p(PauliLabel::I),
            (S::PsiPlus, PsiMinus) => p(PauliLabel::Z),

            (S::PsiMinus, PhiPlus) => zx(),
            (S::PsiMinus, PhiMinus) => p(PauliLabel::X),
            (S::PsiMinus, PsiPlus) => p(PauliLabel::Z),
            (S::PsiMinus, PsiMinus) => p(PauliLabel::I),
        }
    }
}

impl SetFamily {
    /// Representative table used when running the engine for a family.
    pub fn representative(self) -> CorrectionSet {
        match self {
            SetFamily::Psi => CorrectionSet::PsiPlus,
            SetFamily::Phi => CorrectionSet::PhiPlus,
        }
    }

    pub fn other(self) -> SetFamily {
        match self {
            SetFamily::Psi => SetFamily::Phi,
            SetFamily::Phi => SetFamily::Psi,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SetFamily::Psi => "psi",
            SetFamily::Phi => "phi",
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(SetFamily::Psi),
            "phi" => Ok(SetFamily::Phi),
            _ => Err(Error::InvalidArgument(format!("unknown set family '{s}'"))),
        }
    }
}

/// Entries of the X-shaped pair state
///
/// ```text
/// | a 0 0 e |
/// | 0 b c 0 |
/// | 0 c b 0 |
/// | e 0 0 d |
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateEntries {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// One-point magnetization and nearest-neighbour correlators of a
/// translation-invariant chain: `z = <s^z_j>`, `aa = <s^a_j s^a_{j+1}>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCorrelators {
    z: f64,
    xx: f64,
    yy: f64,
    zz: f64,
}

impl PairCorrelators {
    /// Validates ranges and positivity of the implied pair state. Values that
    /// overshoot `[-1, 1]` by less than [`CORRELATOR_TOL`] are clamped.
    pub fn new(z: f64, xx: f64, yy: f64, zz: f64) -> Result<Self> {
        let clamp = |name: &str, v: f64| -> Result<f64> {
            if !v.is_finite() || v.abs() > 1.0 + CORRELATOR_TOL {
                return Err(Error::Unphysical(format!("{name} = {v} outside [-1, 1]")));
            }
            Ok(v.clamp(-1.0, 1.0))
        };
        let c = Self {
            z: clamp("z", z)?,
            xx: clamp("xx", xx)?,
            yy: clamp("yy", yy)?,
            zz: clamp("zz", zz)?,
        };
        let XStateEntries { a, b, c: coh, d, e } = c.entries();
        let tol = CORRELATOR_TOL;
        if a < -tol || b < -tol || d < -tol {
            return Err(Error::Unphysical(format!(
                "negative population (a={a}, b={b}, d={d})"
            )));
        }
        if coh.abs() > b.max(0.0) + tol {
            return Err(Error::Unphysical(format!("|c| = {} exceeds b = {b}", coh.abs())));
        }
        if e * e > a.max(0.0) * d.max(0.0) + tol {
            return Err(Error::Unphysical(format!("|e| = {} exceeds sqrt(a d)", e.abs())));
        }
        Ok(c)
    }

    /// Range check only, without positivity. Meant for evaluating the analytic
    /// expressions at formal points; the engine rejects such values.
    pub fn formal(z: f64, xx: f64, yy: f64, zz: f64) -> Result<Self> {
        for (name, v) in [("z", z), ("xx", xx), ("yy", yy), ("zz", zz)] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::Unphysical(format!("{name} = {v} outside [-1, 1]")));
            }
        }
        Ok(Self { z, xx, yy, zz })
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }
    #[inline]
    pub fn xx(&self) -> f64 {
        self.xx
    }
    #[inline]
    pub fn yy(&self) -> f64 {
        self.yy
    }
    #[inline]
    pub fn zz(&self) -> f64 {
        self.zz
    }

    pub fn entries(&self) -> XStateEntries {
        let (z, xx, yy, zz) = (self.z, self.xx, self.yy, self.zz);
        XStateEntries {
            a: (1.0 + 2.0 * z + zz) / 4.0,
            b: (1.0 - zz) / 4.0,
            c: (xx + yy) / 4.0,
            d: (1.0 - 2.0 * z + zz) / 4.0,
            e: (xx - yy) / 4.0,
        }
    }

    /// Same correlators with `xx` and `yy` replaced (re-validated).
    pub fn with_transverse(&self, xx: f64, yy: f64) -> Result<Self> {
        Self::new(self.z, xx, yy, self.zz)
    }
}

/// The pair state of two neighbouring spins.
pub fn rho23_from_correlators(c: &PairCorrelators) -> Result<DensityMatrix> {
    let XStateEntries { a, b, c, d, e } = c.entries();
    let rows = [
        a, 0.0, 0.0, e, //
        0.0, b, c, 0.0, //
        0.0, c, b, 0.0, //
        e, 0.0, 0.0, d,
    ];
    DensityMatrix::new(Matrix::from_real_rows(4, &rows)?)
        .map_err(|err| Error::Unphysical(err.to_string()))
}

/// Single-spin state `diag((1+z)/2, (1-z)/2)`.
pub fn rho1_from_z(z: f64) -> Result<DensityMatrix> {
    if !z.is_finite() || z.abs() > 1.0 {
        return Err(Error::Unphysical(format!("|z| = {} exceeds 1", z.abs())));
    }
    DensityMatrix::new(Matrix::from_real_diag(&[(1.0 + z) / 2.0, (1.0 - z) / 2.0]))
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Uniform sample over physical correlators, by rejection from the cube `[-1, 1]^4`.
pub fn sample_pair_correlators<R: rand::Rng + ?Sized>(rng: &mut R) -> PairCorrelators {
    loop {
        let mut v = || rng.random_range(-1.0..=1.0);
        if let Ok(c) = PairCorrelators::new(v(), v(), v(), v()) {
            return c;
        }
    }
}
