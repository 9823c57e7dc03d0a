use super::{Observable, GRID_EPS};
use crate::error::{Error, Result};

/// A finite-difference derivative on a uniform grid. Points computed from
/// one-sided differences are marked unreliable.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivative {
    pub values: Vec<f64>,
    pub order: usize,
    pub reliable: Vec<bool>,
}

fn first_difference(f: &[f64], step: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (f[1] - f[0]) / step
            } else if i == n - 1 {
                (f[n - 1] - f[n - 2]) / step
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * step)
            }
        })
        .collect()
}

/// Central differences inside, one-sided at the ends. The second derivative is
/// the first difference of the first derivative.
pub fn finite_difference(series: &[f64], step: f64, order: usize) -> Result<Derivative> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("derivative order must be 1 or 2, got {order}")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let n = series.len();
    if n < order + 1 {
        return Err(Error::InvalidArgument(format!(
            "order-{order} derivative needs at least {} points, got {n}",
            order + 1
        )));
    }
    let mut values = first_difference(series, step);
    if order == 2 {
        values = first_difference(&values, step);
    }
    let reliable = (0..n).map(|i| i >= order && i + order < n).collect();
    Ok(Derivative { values, order, reliable })
}

/// Grid location of the largest `|derivative|` within a window.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremumEstimate {
    pub location: f64,
    /// One grid step for first derivatives, two for second derivatives.
    pub uncertainty: f64,
    pub derivative_order: usize,
    pub observable: Observable,
    pub kt: f64,
    pub derivative_value: f64,
    /// Set when the extremum sits on a grid point computed one-sidedly or on
    /// the window boundary, so the true extremum may lie outside.
    pub at_edge: bool,
}

/// Finds the maximum of `|deriv|` over grid points inside `window`. Ties go to
/// the lower parameter value.
pub fn locate_extremum(
    deriv: &Derivative,
    grid: &[f64],
    window: (f64, f64),
    observable: Observable,
    kt: f64,
) -> Result<ExtremumEstimate> {
    if grid.len() != deriv.values.len() {
        return Err(Error::DimensionMismatch(format!(
            "grid has {} points, derivative {}",
            grid.len(),
            deriv.values.len()
        )));
    }
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    let step = grid[1] - grid[0];
    let eps = GRID_EPS * step.abs().max(1.0);
    let (lo, hi) = (window.0.min(window.1), window.0.max(window.1));
    let inside: Vec<usize> = (0..grid.len())
        .filter(|&i| grid[i] >= lo - eps && grid[i] <= hi + eps)
        .collect();
    let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
        return Err(Error::InvalidArgument(format!("window [{lo}, {hi}] contains no grid point")));
    };
    let mut best = first;
    for &i in &inside {
        if deriv.values[i].abs() > deriv.values[best].abs() {
            best = i;
        }
    }
    let window_edge = inside.len() > 1 && (best == first || best == last);
    Ok(ExtremumEstimate {
        location: grid[best],
        uncertainty: deriv.order as f64 * step,
        derivative_order: deriv.order,
        observable,
        kt,
        derivative_value: deriv.values[best],
        at_edge: !deriv.reliable[best] || window_edge,
    })
}
