//! Thermodynamic-limit correlators of the transverse-field XY chain from its
//! free-fermion solution, by quadrature over the Brillouin zone.

use std::f64::consts::PI;

use super::{ModelSpec, ThermalPoint};
use crate::error::{Error, Result};
use crate::teleport::PairCorrelators;

/// Composite midpoint rule on `[0, pi]`, refined until successive estimates agree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub initial_points: usize,
    pub refinement_factor: usize,
    pub tolerance: f64,
    pub max_refinements: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            initial_points: 10_000,
            refinement_factor: 4,
            tolerance: 1e-9,
            max_refinements: 4,
        }
    }
}

struct Integrand {
    lambda: f64,
    gamma: f64,
    kt: f64,
}

impl Integrand {
    /// Integrands of `z`, `G(1)` and `G(-1)` at momentum `k`.
    #[inline]
    fn eval(&self, k: f64) -> [f64; 3] {
        let (s, c) = k.sin_cos();
        let xi = 1.0 - self.lambda * c;
        let lg = self.lambda * self.gamma * s;
        let e = (xi * xi + lg * lg).sqrt();
        let t_over_e = if self.kt == 0.0 {
            if e > 0.0 {
                1.0 / e
            } else {
                0.0
            }
        } else {
            let x = e / (2.0 * self.kt);
            if x < 1e-8 {
                1.0 / (2.0 * self.kt)
            } else {
                x.tanh() / e
            }
        };
        let anis = lg * s;
        [xi * t_over_e, (anis - xi * c) * t_over_e, (-anis - xi * c) * t_over_e]
    }

    /// Points where the integrand has a kink: the Fermi momentum of the
    /// isotropic chain in its gapless phase.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        if self.gamma == 0.0 && self.lambda > 1.0 {
            pts.push((1.0 / self.lambda).acos());
        }
        pts.push(PI);
        pts
    }

    fn integrate(&self, n: usize) -> [f64; 3] {
        let pts = self.breakpoints();
        let mut acc = [0.0; 3];
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let m = ((n as f64 * (b - a) / PI).ceil() as usize).max(1);
            let h = (b - a) / m as f64;
            let mut part = [0.0; 3];
            for i in 0..m {
                let v = self.eval(a + (i as f64 + 0.5) * h);
                for (p, x) in part.iter_mut().zip(v) {
                    *p += x;
                }
            }
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p * h;
            }
        }
        acc.map(|x| x / PI)
    }
}

/// Correlators `(z, xx, yy, zz)` of the infinite chain with the default quadrature.
pub fn xy_correlators(point: &ThermalPoint) -> Result<PairCorrelators> {
    xy_correlators_with(point, &Quadrature::default())
}

pub fn xy_correlators_with(point: &ThermalPoint, quad: &Quadrature) -> Result<PairCorrelators> {
    let ModelSpec::Xy { lambda, gamma } = point.model else {
        return Err(Error::UnsupportedStrategy(format!(
            "free-fermion correlators need the XY model, got {}",
            point.model
        )));
    };
    point.model.validate()?;
    if !(point.kt >= 0.0) || !point.kt.is_finite() {
        return Err(Error::InvalidArgument(format!("kT must be finite and >= 0, got {}", point.kt)));
    }
    let f = Integrand { lambda, gamma, kt: point.kt };
    let mut n = quad.initial_points.max(1);
    let mut prev = f.integrate(n);
    for _ in 0..quad.max_refinements {
        n *= quad.refinement_factor.max(2);
        let next = f.integrate(n);
        let diff = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prev = next;
        if diff < quad.tolerance {
            let [z, xx, yy] = prev;
            return PairCorrelators::new(z, xx, yy, z * z - xx * yy);
        }
    }
    Err(Error::QuadratureNotConverged(format!(
        "{} at kT={} with {n} points",
        point.model, point.kt
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{ed_correlators, ChainSize};
    use approx::assert_abs_diff_eq;

    fn point(lambda: f64, gamma: f64, kt: f64) -> ThermalPoint {
        ThermalPoint::new(ModelSpec::xy(lambda, gamma).unwrap(), kt).unwrap()
    }

    #[test]
    fn decoupled_spins() {
        let c = xy_correlators(&point(0.0, 0.4, 0.5)).unwrap();
        let z = 1f64.tanh();
        assert_abs_diff_eq!(c.z(), z, epsilon = 1e-12);
        assert_abs_diff_eq!(c.xx(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.yy(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.zz(), z * z, epsilon = 1e-12);
    }

    #[test]
    fn isotropic_ground_states() {
        // Fully polarized below the saturation point.
        let c = xy_correlators(&point(0.5, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(c.z(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.zz(), 1.0, epsilon = 1e-12);
        // Half-filled Fermi sea at lambda = 2: z = 1 - 2 k_F / pi with k_F = pi/3.
        let c = xy_correlators(&point(2.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(c.z(), 1.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.xx(), c.yy(), epsilon = 1e-12);
    }

    #[test]
    fn ising_critical_point_ground_state() {
        // Transverse Ising chain at its critical field, where E(k) = 2 sin(k/2)
        // and the integrals are elementary.
        let c = xy_correlators(&point(1.0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(c.z(), 2.0 / PI, epsilon = 1e-8);
        assert_abs_diff_eq!(c.xx(), 2.0 / PI, epsilon = 1e-8);
        assert_abs_diff_eq!(c.yy(), -2.0 / (3.0 * PI), epsilon = 1e-8);
    }

    #[test]
    fn matches_ed_at_high_temperature() {
        let ff = xy_correlators(&point(0.5, 1.0, 1.0)).unwrap();
        let ed = ed_correlators(&point(0.5, 1.0, 1.0), ChainSize::new(10).unwrap()).unwrap();
        for (a, b) in [(ff.z(), ed.z()), (ff.xx(), ed.xx()), (ff.yy(), ed.yy()), (ff.zz(), ed.zz())] {
            assert!((a - b).abs() < 2e-3, "{ff:?} vs {ed:?}");
        }
    }

    #[test]
    fn rejects_xxz() {
        let p = ThermalPoint::new(ModelSpec::xxz(1.0, 1.0).unwrap(), 0.1).unwrap();
        assert!(matches!(xy_correlators(&p), Err(Error::UnsupportedStrategy(_))));
    }

    #[test]
    fn reports_non_convergence() {
        let quad = Quadrature { initial_points: 4, max_refinements: 1, ..Quadrature::default() };
        assert!(matches!(
            xy_correlators_with(&point(1.0, 1.0, 0.0), &quad),
            Err(Error::QuadratureNotConverged(_))
        ));
    }

    #[test]
    fn gamma_sign_swaps_transverse_axes() {
        let a = xy_correlators(&point(1.5, 0.4, 0.1)).unwrap();
        let b = xy_correlators(&point(1.5, -0.4, 0.1)).unwrap();
        assert_abs_diff_eq!(a.xx(), b.yy(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.yy(), b.xx(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.z(), b.z(), epsilon = 1e-12);
    }
}
