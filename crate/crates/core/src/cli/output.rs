//! CSV emission. Numbers use 17 significant digits so values re-parse exactly.

use std::io::Write;
use std::path::Path;

use crate::chains::ProvidedCorrelators;
use crate::detector::{CrossingPoint, ExtremumEstimate, GammaTransition, QcpEstimate, ScanSeries};
use crate::error::Result;

pub const SCAN_HEADER: [&str; 14] = [
    "param", "kT", "z", "xx", "yy", "zz", "Fbar_psi", "Fbar_phi", "Fmax", "argmax_set", "Dbar_psi",
    "Dbar_phi", "Dmin", "argmin_set",
];

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf)
}

/// One row per grid point and temperature, in scan order. Failed points keep
/// their parameter and temperature with empty value fields.
pub fn scan_csv(series: &[ScanSeries]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        w.write_record(SCAN_HEADER)?;
        for s in series {
            for (p, row) in s.params().into_iter().zip(&s.rows) {
                let mut rec = vec![num(p), num(s.kt)];
                match row {
                    Some(r) => {
                        let c = &r.correlators;
                        rec.extend([c.z(), c.xx(), c.yy(), c.zz()].map(num));
                        rec.extend([r.fbar_psi, r.fbar_phi, r.fmax.value].map(num));
                        rec.push(r.fmax.family.as_str().into());
                        rec.extend([r.dbar_psi, r.dbar_phi, r.dmin.value].map(num));
                        rec.push(r.dmin.family.as_str().into());
                    }
                    None => rec.extend(std::iter::repeat_n(String::new(), 12)),
                }
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn extrema_csv(extrema: &[ExtremumEstimate]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        w.write_record([
            "kT", "observable", "order", "location", "uncertainty", "derivative", "at_edge",
        ])?;
        for e in extrema {
            w.write_record([
                num(e.kt),
                e.observable.name().into(),
                e.derivative_order.to_string(),
                num(e.location),
                num(e.uncertainty),
                num(e.derivative_value),
                e.at_edge.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn gamma_transition_csv(rows: &[GammaTransition]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        w.write_record(["kT", "Dmin_argmax", "Fmax_argmin"])?;
        for r in rows {
            w.write_record([num(r.kt), num(r.dmin_argmax), num(r.fmax_argmin)])?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn crossings_csv(points: &[CrossingPoint]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        w.write_record(["kT", "kind", "param", "bracket_lo", "bracket_hi", "residual"])?;
        for c in points {
            w.write_record([
                num(c.kt),
                c.kind.as_str().into(),
                num(c.param_value),
                num(c.bracket.0),
                num(c.bracket.1),
                num(c.residual),
            ])?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn correlators_csv(rows: &[(f64, ProvidedCorrelators)]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        w.write_record(["kT", "z", "xx", "yy", "zz", "provider"])?;
        for (kt, p) in rows {
            let c = &p.correlators;
            let mut rec = vec![num(*kt)];
            rec.extend([c.z(), c.xx(), c.yy(), c.zz()].map(num));
            rec.push(p.provenance.strategy.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub fn qcp_summary(e: &QcpEstimate, label: &str) -> String {
    format!(
        "{label}: extrapolated {:.6} ({} fit over {} points, residual {:.3e})\n",
        e.extrapolated_location,
        e.fit_kind,
        e.fit_points.len(),
        e.residual
    )
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}
