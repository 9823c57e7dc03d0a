use std::fmt;

use super::ScanSeries;
use crate::chains::{CorrelatorProvider, ThermalPoint};
use crate::error::Result;
use crate::teleport::{mean_fidelity, mean_trace_distance, PairCorrelators, SetFamily};

/// Values this small are treated as zero when looking for sign changes.
const SIGN_FLOOR: f64 = 1e-13;
const PARAM_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingKind {
    /// The two fidelity curves intersect.
    FidelityCrossing,
    /// The two trace-distance curves intersect, i.e. `zz = -z^2`.
    TraceDistanceCrossing,
    /// `z^3 - z*zz` changes sign.
    CubicSignChange,
}

impl CrossingKind {
    pub const ALL: [CrossingKind; 3] = [
        CrossingKind::FidelityCrossing,
        CrossingKind::TraceDistanceCrossing,
        CrossingKind::CubicSignChange,
    ];

    /// The function whose zero defines this crossing.
    pub fn evaluate(self, c: &PairCorrelators) -> f64 {
        match self {
            CrossingKind::FidelityCrossing => {
                mean_fidelity(c, SetFamily::Psi) - mean_fidelity(c, SetFamily::Phi)
            }
            CrossingKind::TraceDistanceCrossing => {
                mean_trace_distance(c, SetFamily::Psi) - mean_trace_distance(c, SetFamily::Phi)
            }
            CrossingKind::CubicSignChange => {
                let (z, zz) = (c.z(), c.zz());
                z * z * z - z * zz
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CrossingKind::FidelityCrossing => "fidelity-crossing",
            CrossingKind::TraceDistanceCrossing => "trace-distance-crossing",
            CrossingKind::CubicSignChange => "cubic-sign-change",
        }
    }
}

impl fmt::Display for CrossingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingPoint {
    pub param_value: f64,
    pub kind: CrossingKind,
    pub kt: f64,
    /// Grid points bracketing the crossing.
    pub bracket: (f64, f64),
    /// `|f|` at the refined location.
    pub residual: f64,
}

fn sign(x: f64) -> i8 {
    if x > SIGN_FLOOR {
        1
    } else if x < -SIGN_FLOOR {
        -1
    } else {
        0
    }
}

/// Brackets sign changes on the grid and refines each by bisection, using
/// `correlators_at` to evaluate off-grid parameters. Grid values within the
/// noise floor of zero are skipped when bracketing.
pub fn find_crossings<F>(series: &ScanSeries, correlators_at: F) -> Result<Vec<CrossingPoint>>
where
    F: Fn(f64) -> Result<PairCorrelators>,
{
    let params = series.params();
    let mut out = Vec::new();
    for kind in CrossingKind::ALL {
        let signed: Vec<(f64, i8)> = series
            .rows
            .iter()
            .zip(&params)
            .filter_map(|(r, &p)| r.map(|r| (p, sign(kind.evaluate(&r.correlators)))))
            .filter(|&(_, s)| s != 0)
            .collect();
        for w in signed.windows(2) {
            let ((a, sa), (b, sb)) = (w[0], w[1]);
            if sa == sb {
                continue;
            }
            let (mut lo, mut hi) = (a, b);
            let mut mid = 0.5 * (lo + hi);
            let mut fm = kind.evaluate(&correlators_at(mid)?);
            for _ in 0..MAX_BISECTIONS {
                if fm == 0.0 || hi - lo < PARAM_TOL {
                    break;
                }
                if sign(fm) == sa || (sign(fm) == 0 && fm.signum() as i8 == sa) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                mid = 0.5 * (lo + hi);
                fm = kind.evaluate(&correlators_at(mid)?);
            }
            out.push(CrossingPoint {
                param_value: mid,
                kind,
                kt: series.kt,
                bracket: (a, b),
                residual: fm.abs(),
            });
        }
    }
    out.sort_by(|x, y| x.param_value.total_cmp(&y.param_value).then(x.kind.cmp(&y.kind)));
    Ok(out)
}

/// [`find_crossings`] re-evaluating through the provider and strategy of the scan.
pub fn find_crossings_with_provider(
    series: &ScanSeries,
    provider: &CorrelatorProvider,
) -> Result<Vec<CrossingPoint>> {
    find_crossings(series, |p| {
        let point = ThermalPoint::new(series.family.model_at(p)?, series.kt)?;
        Ok(provider.correlators(&point, series.strategy)?.correlators)
    })
}
