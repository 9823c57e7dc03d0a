//! Critical anisotropies of the XXZ chain in a longitudinal field.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_TOL: f64 = 1e-16;
const ETA_TOL: f64 = 1e-14;
/// `eta` above this makes `sinh` overflow the field scale.
const ETA_MAX: f64 = 700.0;

/// Lower critical anisotropy, where the field-saturated state gives way,
/// `h = 4 (1 + delta1)`.
pub fn xxz_qcp_delta1(h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("field must be positive, got {h}")));
    }
    Ok(h / 4.0 - 1.0)
}

fn sech(x: f64) -> f64 {
    if x.abs() > ETA_MAX {
        0.0
    } else {
        1.0 / x.cosh()
    }
}

/// `sum_{j in Z} (-1)^j / cosh(j eta)`
fn alternating_sech_sum(eta: f64) -> f64 {
    if eta >= 1.0 {
        let mut s = 1.0;
        for j in 1.. {
            let t = 2.0 * sech(j as f64 * eta);
            s += if j % 2 == 0 { t } else { -t };
            if t < SERIES_TOL {
                break;
            }
        }
        s
    } else {
        // Poisson-resummed form, free of cancellation at small eta.
        let mut s = 0.0;
        for n in 0.. {
            let t = sech((2 * n + 1) as f64 * PI * PI / (2.0 * eta));
            s += t;
            if t < SERIES_TOL * s.max(f64::MIN_POSITIVE) || t == 0.0 {
                break;
            }
        }
        2.0 * PI / eta * s
    }
}

/// Field at which the gapped antiferromagnetic phase with `delta = cosh(eta)` closes.
pub fn xxz_field_for_eta(eta: f64) -> f64 {
    if eta <= 0.0 {
        return 0.0;
    }
    4.0 * eta.sinh() * alternating_sech_sum(eta)
}

/// Upper critical anisotropy `delta2 = cosh(eta)` with `eta` solving
/// `h = 4 sinh(eta) sum_j (-1)^j / cosh(j eta)`.
pub fn xxz_qcp_delta2(h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NoBracket(format!("field must be positive and finite, got {h}")));
    }
    let mut hi = 1.0;
    while xxz_field_for_eta(hi) < h {
        hi *= 2.0;
        if hi > ETA_MAX {
            return Err(Error::NoBracket(format!("no root for h = {h}")));
        }
    }
    let mut lo = 0.0;
    while hi - lo > ETA_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if xxz_field_for_eta(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).cosh())
}
