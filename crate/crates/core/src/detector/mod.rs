//! Finite-temperature critical-point detection from parameter scans of the
//! teleportation efficiencies.

mod crossings;
mod derivative;
mod fit;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{CorrelatorProvider, ModelSpec, Strategy, ThermalPoint};
use crate::error::{Error, Result};
use crate::teleport::{
    d_min, f_max, mean_fidelity, mean_trace_distance, Extremum, PairCorrelators, SetFamily,
};

pub use crossings::{find_crossings, find_crossings_with_provider, CrossingKind, CrossingPoint};
pub use derivative::{finite_difference, locate_extremum, Derivative, ExtremumEstimate};
pub use fit::{extrapolate_qcp, FitKind, QcpEstimate};

/// Relative slack when matching parameters against grid points.
const GRID_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    Delta,
    Lambda,
    Gamma,
}

impl ScanAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanAxis::Delta => "delta",
            ScanAxis::Lambda => "lambda",
            ScanAxis::Gamma => "gamma",
        }
    }
}

impl fmt::Display for ScanAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A one-parameter family of models: the scanned axis plus the fixed parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelFamily {
    /// XXZ at fixed field, scanning the anisotropy.
    XxzDelta { h: f64 },
    /// XY at fixed anisotropy, scanning lambda.
    XyLambda { gamma: f64 },
    /// XY at fixed lambda, scanning the anisotropy.
    XyGamma { lambda: f64 },
}

impl ModelFamily {
    pub fn axis(&self) -> ScanAxis {
        match self {
            ModelFamily::XxzDelta { .. } => ScanAxis::Delta,
            ModelFamily::XyLambda { .. } => ScanAxis::Lambda,
            ModelFamily::XyGamma { .. } => ScanAxis::Gamma,
        }
    }

    pub fn model_at(&self, p: f64) -> Result<ModelSpec> {
        match *self {
            ModelFamily::XxzDelta { h } => ModelSpec::xxz(p, h),
            ModelFamily::XyLambda { gamma } => ModelSpec::xy(p, gamma),
            ModelFamily::XyGamma { lambda } => ModelSpec::xy(lambda, p),
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFamily::XxzDelta { h } => write!(f, "XXZ h={h}, scanning delta"),
            ModelFamily::XyLambda { gamma } => write!(f, "XY gamma={gamma}, scanning lambda"),
            ModelFamily::XyGamma { lambda } => write!(f, "XY lambda={lambda}, scanning gamma"),
        }
    }
}

/// Uniform ascending grid `start + i*step`, `i < len`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    start: f64,
    step: f64,
    len: usize,
}

impl Grid {
    /// Grid covering `[start, end]`; `end` is included when it lies on the grid.
    pub fn from_range(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
        }
        if !start.is_finite() || !end.is_finite() || !(end > start) {
            return Err(Error::InvalidArgument(format!(
                "empty or degenerate range [{start}, {end}]"
            )));
        }
        let n = ((end - start) / step + GRID_EPS).floor() as usize + 1;
        Ok(Self { start, step, len: n })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }
}

/// Quantities recorded at each scan point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    Z,
    Xx,
    Yy,
    Zz,
    FbarPsi,
    FbarPhi,
    Fmax,
    DbarPsi,
    DbarPhi,
    Dmin,
}

impl Observable {
    pub const ALL: [Observable; 10] = [
        Observable::Z,
        Observable::Xx,
        Observable::Yy,
        Observable::Zz,
        Observable::FbarPsi,
        Observable::FbarPhi,
        Observable::Fmax,
        Observable::DbarPsi,
        Observable::DbarPhi,
        Observable::Dmin,
    ];

    /// Column name used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Observable::Z => "z",
            Observable::Xx => "xx",
            Observable::Yy => "yy",
            Observable::Zz => "zz",
            Observable::FbarPsi => "Fbar_psi",
            Observable::FbarPhi => "Fbar_phi",
            Observable::Fmax => "Fmax",
            Observable::DbarPsi => "Dbar_psi",
            Observable::DbarPhi => "Dbar_phi",
            Observable::Dmin => "Dmin",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown observable '{s}'")))
    }
}

/// Everything evaluated at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub param: f64,
    pub correlators: PairCorrelators,
    pub fbar_psi: f64,
    pub fbar_phi: f64,
    pub fmax: Extremum,
    pub dbar_psi: f64,
    pub dbar_phi: f64,
    pub dmin: Extremum,
}

impl ScanRow {
    pub fn from_correlators(param: f64, c: PairCorrelators) -> Self {
        Self {
            param,
            correlators: c,
            fbar_psi: mean_fidelity(&c, SetFamily::Psi),
            fbar_phi: mean_fidelity(&c, SetFamily::Phi),
            fmax: f_max(&c),
            dbar_psi: mean_trace_distance(&c, SetFamily::Psi),
            dbar_phi: mean_trace_distance(&c, SetFamily::Phi),
            dmin: d_min(&c),
        }
    }

    pub fn get(&self, o: Observable) -> f64 {
        let c = &self.correlators;
        match o {
            Observable::Z => c.z(),
            Observable::Xx => c.xx(),
            Observable::Yy => c.yy(),
            Observable::Zz => c.zz(),
            Observable::FbarPsi => self.fbar_psi,
            Observable::FbarPhi => self.fbar_phi,
            Observable::Fmax => self.fmax.value,
            Observable::DbarPsi => self.dbar_psi,
            Observable::DbarPhi => self.dbar_phi,
            Observable::Dmin => self.dmin.value,
        }
    }
}

/// A scan at one temperature. Points where the provider failed are gaps.
#[derive(Clone, Debug)]
pub struct ScanSeries {
    pub family: ModelFamily,
    pub grid: Grid,
    pub kt: f64,
    pub strategy: Strategy,
    pub rows: Vec<Option<ScanRow>>,
    /// Grid index and message of each failed point.
    pub failures: Vec<(usize, String)>,
}

impl ScanSeries {
    pub fn axis(&self) -> ScanAxis {
        self.family.axis()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn params(&self) -> Vec<f64> {
        self.grid.values()
    }

    pub fn column(&self, o: Observable) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.map(|r| r.get(o))).collect()
    }

    /// Full column, failing if the scan has gaps.
    pub fn values(&self, o: Observable) -> Result<Vec<f64>> {
        self.column(o)
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "scan has a gap at {} = {}",
                        self.axis(),
                        self.grid.value(i)
                    ))
                })
            })
            .collect()
    }
}

/// Evaluates correlators and efficiencies at every grid point, in parallel.
pub fn scan(
    family: ModelFamily,
    grid: Grid,
    kt: f64,
    strategy: Strategy,
    provider: &CorrelatorProvider,
) -> Result<ScanSeries> {
    if !(kt >= 0.0) || !kt.is_finite() {
        return Err(Error::InvalidArgument(format!("kT must be finite and >= 0, got {kt}")));
    }
    if let (Strategy::FreeFermion, ModelFamily::XxzDelta { .. }) = (strategy, family) {
        return Err(Error::UnsupportedStrategy(
            "free-fermion correlators exist only for the XY model".into(),
        ));
    }
    let results: Vec<Result<ScanRow>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = grid.value(i);
            let point = ThermalPoint::new(family.model_at(p)?, kt)?;
            let c = provider.correlators(&point, strategy)?.correlators;
            Ok(ScanRow::from_correlators(p, c))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(Some(row)),
            Err(e) => {
                log::warn!("{family} at {} = {}: {e}", family.axis(), grid.value(i));
                failures.push((i, e.to_string()));
                rows.push(None);
            }
        }
    }
    Ok(ScanSeries { family, grid, kt, strategy, rows, failures })
}

/// Grid argmax of a column over its defined values; ties go to the lower parameter.
pub fn argmax(params: &[f64], values: &[Option<f64>]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for (&p, v) in params.iter().zip(values) {
        if let Some(v) = *v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((p, v));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Grid argmin; ties go to the lower parameter.
pub fn argmin(params: &[f64], values: &[Option<f64>]) -> Option<f64> {
    let neg: Vec<Option<f64>> = values.iter().map(|v| v.map(|x| -x)).collect();
    argmax(params, &neg)
}

/// Locations of the maximum of the minimal trace distance and the minimum of
/// the maximal fidelity over an anisotropy scan at one temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaTransition {
    pub kt: f64,
    pub dmin_argmax: f64,
    pub fmax_argmin: f64,
}

pub fn gamma_transition_check(
    lambda: f64,
    kts: &[f64],
    grid: Grid,
    strategy: Strategy,
    provider: &CorrelatorProvider,
) -> Result<Vec<GammaTransition>> {
    let family = ModelFamily::XyGamma { lambda };
    kts.iter()
        .map(|&kt| {
            let s = scan(family, grid, kt, strategy, provider)?;
            let params = s.params();
            let none = || Error::InvalidArgument(format!("no valid scan points at kT = {kt}"));
            Ok(GammaTransition {
                kt,
                dmin_argmax: argmax(&params, &s.column(Observable::Dmin)).ok_or_else(none)?,
                fmax_argmin: argmin(&params, &s.column(Observable::Fmax)).ok_or_else(none)?,
            })
        })
        .collect()
}

/// Per-temperature extrema and their extrapolation to zero temperature.
#[derive(Clone, Debug)]
pub struct Detection {
    pub extrema: Vec<ExtremumEstimate>,
    pub estimate: QcpEstimate,
}

/// Runs scan, derivative and extremum search at each temperature, then fits
/// the extremum locations against `kT`.
#[allow(clippy::too_many_arguments)]
pub fn detect_qcp(
    family: ModelFamily,
    grid: Grid,
    kts: &[f64],
    strategy: Strategy,
    observable: Observable,
    order: usize,
    window: (f64, f64),
    fit: FitKind,
    provider: &CorrelatorProvider,
) -> Result<Detection> {
    let mut extrema = Vec::with_capacity(kts.len());
    for &kt in kts {
        let s = scan(family, grid, kt, strategy, provider)?;
        let d = finite_difference(&s.values(observable)?, grid.step(), order)?;
        extrema.push(locate_extremum(&d, &s.params(), window, observable, kt)?);
    }
    let points: Vec<(f64, f64)> = extrema.iter().map(|e| (e.kt, e.location)).collect();
    let estimate = extrapolate_qcp(&points, fit)?;
    Ok(Detection { extrema, estimate })
}
