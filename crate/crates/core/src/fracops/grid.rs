use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{FracError, Result};

/// Uniform periodic grid standing in for the real line.
///
/// Nodes are `t_j = -R + j·h` for `j = 0..N`, with `h = 2R/N`; the node
/// `t = 0` is always present. Frequencies follow the usual FFT ordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLineGrid {
    halfwidth: f64,
    num_points: usize,
}

impl RealLineGrid {
    pub fn new(halfwidth: f64, num_points: usize) -> Result<Self> {
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(FracError::Config(format!(
                "real-line halfwidth must be positive, got {halfwidth}"
            )));
        }
        if num_points < 4 || !num_points.is_power_of_two() {
            return Err(FracError::Config(format!(
                "real-line grid needs a power-of-two node count >= 4, got {num_points}"
            )));
        }
        Ok(Self {
            halfwidth,
            num_points,
        })
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / self.num_points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.halfwidth + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|j| self.node(j)).collect()
    }

    /// Spacing of the angular-frequency lattice, `2π / (N h)`.
    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / (self.num_points as f64 * self.spacing())
    }

    /// Angular frequency attached to FFT bin `k`; bin `N/2` carries `-π/h`.
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.num_points as i64;
        let k = k as i64;
        let signed = if k < n / 2 { k } else { k - n };
        signed as f64 * self.frequency_spacing()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.num_points).map(|k| self.frequency(k)).collect()
    }

    /// Index of the node nearest to `t`, wrapping periodically.
    pub fn nearest_node(&self, t: f64) -> usize {
        let x = ((t + self.halfwidth) / self.spacing()).round() as i64;
        x.rem_euclid(self.num_points as i64) as usize
    }
}

/// Uniform grid on `[a, b]` including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalGrid {
    a: f64,
    b: f64,
    num_points: usize,
}

impl IntervalGrid {
    pub fn new(a: f64, b: f64, num_points: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FracError::Config(format!(
                "interval endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if num_points < 2 {
            return Err(FracError::Config(format!(
                "interval grid needs at least 2 nodes, got {num_points}"
            )));
        }
        Ok(Self { a, b, num_points })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.num_points - 1) as f64
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.num_points {
            self.b
        } else {
            self.a + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.node(i)).collect()
    }

    /// Number of interior nodes (Dirichlet degrees of freedom).
    pub fn interior_len(&self) -> usize {
        self.num_points.saturating_sub(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    Line(RealLineGrid),
    Interval(IntervalGrid),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::Line(g) => g.num_points(),
            Grid::Interval(g) => g.num_points(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, j: usize) -> f64 {
        match self {
            Grid::Line(g) => g.node(j),
            Grid::Interval(g) => g.node(j),
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        match self {
            Grid::Line(g) => g.nodes(),
            Grid::Interval(g) => g.nodes(),
        }
    }

    pub fn spacing(&self) -> f64 {
        match self {
            Grid::Line(g) => g.spacing(),
            Grid::Interval(g) => g.spacing(),
        }
    }

    pub fn as_line(&self) -> Result<&RealLineGrid> {
        match self {
            Grid::Line(g) => Ok(g),
            Grid::Interval(_) => Err(FracError::GridMismatch(
                "expected a real-line grid, got an interval grid".into(),
            )),
        }
    }

    pub fn as_interval(&self) -> Result<&IntervalGrid> {
        match self {
            Grid::Interval(g) => Ok(g),
            Grid::Line(_) => Err(FracError::GridMismatch(
                "expected an interval grid, got a real-line grid".into(),
            )),
        }
    }
}

impl From<RealLineGrid> for Grid {
    fn from(g: RealLineGrid) -> Self {
        Grid::Line(g)
    }
}

impl From<IntervalGrid> for Grid {
    fn from(g: IntervalGrid) -> Self {
        Grid::Interval(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_grid_invariants() {
        let g = RealLineGrid::new(20.0, 4096).unwrap();
        assert_eq!(g.spacing() * g.num_points() as f64, 2.0 * g.halfwidth());
        assert_eq!(g.node(2048), 0.0);
        let w = g.frequencies();
        assert_eq!(w[0], 0.0);
        for k in 1..2048 {
            assert_eq!(w[k], -w[4096 - k]);
        }
        assert!(w[2048] < 0.0);
        assert!((w[2048] + PI / g.spacing()).abs() < 1e-9);
    }

    #[test]
    fn line_grid_rejects_bad_sizes() {
        assert!(RealLineGrid::new(1.0, 2).is_err());
        assert!(RealLineGrid::new(1.0, 100).is_err());
        assert!(RealLineGrid::new(0.0, 64).is_err());
    }

    #[test]
    fn interval_endpoints_are_exact() {
        let g = IntervalGrid::new(-0.3, 0.7, 7).unwrap();
        assert_eq!(g.node(0), -0.3);
        assert_eq!(g.node(6), 0.7);
        assert_eq!(g.interior_len(), 5);
        assert!(IntervalGrid::new(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn nearest_node_wraps() {
        let g = RealLineGrid::new(1.0, 8).unwrap();
        assert_eq!(g.nearest_node(0.0), 4);
        assert_eq!(g.nearest_node(-1.0), 0);
        assert_eq!(g.nearest_node(1.0), 0);
    }
}
