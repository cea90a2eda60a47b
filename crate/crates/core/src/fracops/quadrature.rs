//! Trapezoid rule on both grid kinds.
//!
//! On the periodic real-line grid every node carries weight `h`; on an
//! interval grid the two endpoints carry `h/2`. Every integral in the crate
//! uses these weights.

use super::grid::Grid;
use super::gridfn::GridFunction;

/// Trapezoid weights divided by `h` (`1`, or `½` at interval endpoints).
pub fn unit_weights(grid: &Grid) -> Vec<f64> {
    let mut w = vec![1.0; grid.len()];
    if let Grid::Interval(_) = grid {
        w[0] = 0.5;
        let last = w.len() - 1;
        w[last] = 0.5;
    }
    w
}

pub fn quadrature_weights(grid: &Grid) -> Vec<f64> {
    let h = grid.spacing();
    unit_weights(grid).into_iter().map(|c| c * h).collect()
}

/// `Σ_j w_j f_j` for nodal values `f`, with the factor `h` applied last so
/// that sums of exactly representable values stay exact.
pub fn weighted_sum(grid: &Grid, f: impl IntoIterator<Item = f64>) -> f64 {
    let acc: f64 = unit_weights(grid).iter().zip(f).map(|(c, x)| c * x).sum();
    acc * grid.spacing()
}

/// `∫ f(t, u(t)) dt`.
pub fn integrate(u: &GridFunction, f: impl Fn(f64, &[f64]) -> f64) -> f64 {
    let grid = u.grid();
    weighted_sum(grid, (0..grid.len()).map(|j| f(grid.node(j), u.at(j))))
}

/// `∫ u` for a scalar grid function.
pub fn integrate_scalar(u: &GridFunction) -> f64 {
    integrate(u, |_, v| v[0])
}
