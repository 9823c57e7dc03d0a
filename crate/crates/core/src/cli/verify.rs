//! Self-checks comparing independent routes to the same quantities.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{
    dense_thermal_state, ed_spectrum, xxz_field_for_eta, xxz_qcp_delta2, xy_correlators, ChainSize,
    ModelSpec, ThermalPoint,
};
use crate::qmat::{trace_distance, trace_distance_bloch, DensityMatrix, Matrix};
use crate::teleport::{
    engine_efficiency, sample_pair_correlators, PairCorrelators, SetFamily,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyLevel {
    Quick,
    Full,
}

/// The analytic efficiencies under test. Swappable so that a deliberately
/// broken formula can be shown to fail.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub mean_fidelity: fn(&PairCorrelators, SetFamily) -> f64,
    pub mean_trace_distance: fn(&PairCorrelators, SetFamily) -> f64,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            mean_fidelity: crate::teleport::mean_fidelity,
            mean_trace_distance: crate::teleport::mean_trace_distance,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn check(name: &str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(_) => (false, "check panicked".into()),
    };
    CheckResult { name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

fn engine_vs_closed_forms(forms: &ClosedForms, samples: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let c = sample_pair_correlators(&mut rng);
        for family in [SetFamily::Psi, SetFamily::Phi] {
            let (f, d) = engine_efficiency(&c, family.representative()).map_err(|e| e.to_string())?;
            worst = worst
                .max((f - (forms.mean_fidelity)(&c, family)).abs())
                .max((d - (forms.mean_trace_distance)(&c, family)).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("{samples} samples, max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-10"))
    }
}

fn random_qubit<R: Rng>(rng: &mut R) -> DensityMatrix {
    loop {
        let r = [0; 3].map(|_| rng.random_range(-1.0..=1.0f64));
        if r.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            let m = Matrix::from_fn(2, |i, j| {
                use num_complex::Complex64 as C;
                match (i, j) {
                    (0, 0) => C::new((1.0 + r[2]) / 2.0, 0.0),
                    (1, 1) => C::new((1.0 - r[2]) / 2.0, 0.0),
                    (0, 1) => C::new(r[0] / 2.0, -r[1] / 2.0),
                    _ => C::new(r[0] / 2.0, r[1] / 2.0),
                }
            });
            return DensityMatrix::new(m).expect("Bloch ball state");
        }
    }
}

fn bloch_identity(samples: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (a, b) = (random_qubit(&mut rng), random_qubit(&mut rng));
        let d1 = trace_distance(&a, &b).map_err(|e| e.to_string())?;
        let d2 = trace_distance_bloch(&a, &b).map_err(|e| e.to_string())?;
        worst = worst.max((d1 - d2).abs());
    }
    if worst < 1e-12 {
        Ok(format!("{samples} pairs, max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-12"))
    }
}

fn delta2_root() -> Result<String, String> {
    let d = xxz_qcp_delta2(12.0).map_err(|e| e.to_string())?;
    let back = xxz_field_for_eta(d.acosh());
    if (d - 4.875).abs() <= 1e-3 && (back - 12.0).abs() < 1e-8 {
        Ok(format!("delta2(12) = {d:.6}, field from root {back:.10}"))
    } else {
        Err(format!("delta2(12) = {d}, field from root {back}"))
    }
}

fn ed_vs_free_fermion(l: usize, lambdas: &[f64], kt: f64, tol: f64) -> Result<String, String> {
    let size = ChainSize::new(l).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for &lambda in lambdas {
        let model = ModelSpec::xy(lambda, 1.0).map_err(|e| e.to_string())?;
        let ed = ed_spectrum(&model, size).map_err(|e| e.to_string())?.averages(kt);
        let point = ThermalPoint::new(model, kt).map_err(|e| e.to_string())?;
        let ff = xy_correlators(&point).map_err(|e| e.to_string())?;
        for (a, b) in ed.iter().zip([ff.z(), ff.xx(), ff.yy(), ff.zz()]) {
            worst = worst.max((a - b).abs());
        }
    }
    if worst < tol {
        Ok(format!("L={l}, kT={kt}, max deviation {worst:.2e}"))
    } else {
        Err(format!("L={l}, kT={kt}, max deviation {worst:.2e} exceeds {tol:e}"))
    }
}

fn block_vs_dense_ed(l: usize) -> Result<String, String> {
    let model = ModelSpec::xy(1.2, 0.5).map_err(|e| e.to_string())?;
    let kt = 0.3;
    let block = ed_spectrum(&model, ChainSize::new(l).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .averages(kt);
    let dense = dense_thermal_state(&model, l, kt).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for j in 0..l {
        for (a, b) in block.iter().zip(dense.site_correlators(j)) {
            worst = worst.max((a - b).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("L={l}, max deviation {worst:.2e} over all sites"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-10"))
    }
}

pub fn run_verify(level: VerifyLevel, forms: &ClosedForms) -> Vec<CheckResult> {
    let full = level == VerifyLevel::Full;
    let samples = if full { 1000 } else { 200 };
    let mut out = vec![
        check("engine vs closed forms", || engine_vs_closed_forms(forms, samples)),
        check("trace distance Bloch identity", || bloch_identity(samples)),
        check("delta2 root", delta2_root),
        check("ED vs free fermion (L=10)", || ed_vs_free_fermion(10, &[0.5], 1.0, 2e-3)),
        check("block vs dense ED", || block_vs_dense_ed(if full { 10 } else { 6 })),
    ];
    if full {
        out.push(check("ED vs free fermion (L=14)", || {
            ed_vs_free_fermion(14, &[0.5, 1.0, 1.5], 1.0, 2e-3)
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let results = run_verify(VerifyLevel::Quick, &ClosedForms::default());
        for r in &results {
            assert!(r.passed, "{}", r.line());
        }
    }

    fn tampered_fidelity(c: &PairCorrelators, family: SetFamily) -> f64 {
        // Both 1/8 prefactors replaced by 1/7.
        crate::teleport::mean_fidelity(c, family) * 8.0 / 7.0
    }

    #[test]
    fn tampered_closed_form_fails() {
        let forms = ClosedForms { mean_fidelity: tampered_fidelity, ..ClosedForms::default() };
        let r = check("engine vs closed forms", || engine_vs_closed_forms(&forms, 50));
        assert!(!r.passed);
    }
}
