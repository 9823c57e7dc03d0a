use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Linear,
    Quadratic,
}

impl FitKind {
    fn num_coefficients(self) -> usize {
        match self {
            FitKind::Linear => 2,
            FitKind::Quadratic => 3,
        }
    }

    fn min_points(self) -> usize {
        match self {
            FitKind::Linear => 3,
            FitKind::Quadratic => 4,
        }
    }
}

impl std::fmt::Display for FitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitKind::Linear => "linear",
            FitKind::Quadratic => "quadratic",
        })
    }
}

impl std::str::FromStr for FitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(FitKind::Linear),
            "quadratic" => Ok(FitKind::Quadratic),
            _ => Err(Error::InvalidArgument(format!("unknown fit '{s}', expected linear or quadratic"))),
        }
    }
}

/// Zero-temperature extrapolation of extremum locations.
#[derive(Clone, Debug, PartialEq)]
pub struct QcpEstimate {
    pub extrapolated_location: f64,
    pub fit_kind: FitKind,
    /// `(kT, location)` pairs used in the fit; `kT = 0` points are excluded.
    pub fit_points: Vec<(f64, f64)>,
    /// Polynomial coefficients in increasing degree.
    pub coefficients: Vec<f64>,
    /// Euclidean norm of the fit residuals.
    pub residual: f64,
}

/// Unweighted least-squares polynomial fit of location against `kT`,
/// evaluated at `kT = 0`.
pub fn extrapolate_qcp(points: &[(f64, f64)], fit_kind: FitKind) -> Result<QcpEstimate> {
    let pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(kt, _)| kt > 0.0).collect();
    if pts.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::InvalidArgument("non-finite fit point".into()));
    }
    let need = fit_kind.min_points();
    if pts.len() < need {
        return Err(Error::InvalidArgument(format!(
            "{fit_kind} fit needs at least {need} points with kT > 0, got {}",
            pts.len()
        )));
    }
    let m = fit_kind.num_coefficients();
    let mut distinct: Vec<f64> = pts.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < m {
        return Err(Error::RankDeficient(format!(
            "{} distinct temperatures for {m} coefficients",
            distinct.len()
        )));
    }
    let a = Mat::<f64>::from_fn(pts.len(), m, |i, j| pts[i].0.powi(j as i32));
    let b = Mat::<f64>::from_fn(pts.len(), 1, |i, _| pts[i].1);
    let qr = a.qr();
    let r = qr.thin_R();
    let scale = (0..m).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..m).any(|i| r[(i, i)].abs() <= 1e-12 * scale) {
        return Err(Error::RankDeficient("design matrix is singular".into()));
    }
    let x = qr.solve_lstsq(&b);
    let coefficients: Vec<f64> = (0..m).map(|j| x[(j, 0)]).collect();
    let residual = pts
        .iter()
        .map(|&(kt, loc)| {
            let fit: f64 = coefficients.iter().enumerate().map(|(j, c)| c * kt.powi(j as i32)).sum();
            (loc - fit).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    Ok(QcpEstimate {
        extrapolated_location: coefficients[0],
        fit_kind,
        fit_points: pts,
        coefficients,
        residual,
    })
}
