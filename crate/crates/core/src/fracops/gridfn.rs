use serde::{Deserialize, Serialize};

use super::grid::{Grid, IntervalGrid};
use super::quadrature::weighted_sum;
use crate::error::{FracError, Result};

/// Samples of an `ℝⁿ`-valued function on a grid, stored node-major:
/// `values[j * n + c]` is component `c` at node `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    grid: Grid,
    dim: usize,
    dirichlet: bool,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: impl Into<Grid>, dim: usize) -> Self {
        let grid = grid.into();
        let dirichlet = matches!(grid, Grid::Interval(_));
        Self {
            values: vec![0.0; grid.len() * dim],
            grid,
            dim,
            dirichlet,
        }
    }

    pub fn from_values(grid: impl Into<Grid>, dim: usize, values: Vec<f64>) -> Result<Self> {
        let grid = grid.into();
        if dim == 0 {
            return Err(FracError::Config("vector dimension must be >= 1".into()));
        }
        if values.len() != grid.len() * dim {
            return Err(FracError::GridMismatch(format!(
                "expected {} values for {} nodes of dimension {dim}, got {}",
                grid.len() * dim,
                grid.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(FracError::Domain(format!("non-finite grid value {bad}")));
        }
        Ok(Self {
            grid,
            dim,
            dirichlet: false,
            values,
        })
    }

    /// Scalar function sampled at every node.
    pub fn from_fn(grid: impl Into<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let grid = grid.into();
        let values = grid.nodes().into_iter().map(f).collect();
        Self {
            grid,
            dim: 1,
            dirichlet: false,
            values,
        }
    }

    /// Scalar profile times a fixed direction in `ℝⁿ`.
    pub fn from_profile(grid: impl Into<Grid>, direction: &[f64], f: impl Fn(f64) -> f64) -> Self {
        let grid = grid.into();
        let dim = direction.len();
        let mut values = Vec::with_capacity(grid.len() * dim);
        for t in grid.nodes() {
            let s = f(t);
            values.extend(direction.iter().map(|d| s * d));
        }
        Self {
            grid,
            dim,
            dirichlet: false,
            values,
        }
    }

    /// Interval function with homogeneous Dirichlet data; endpoint values
    /// must already be exactly zero.
    pub fn dirichlet(grid: IntervalGrid, dim: usize, values: Vec<f64>) -> Result<Self> {
        let mut f = Self::from_values(grid, dim, values)?;
        f.check_endpoints()?;
        f.dirichlet = true;
        Ok(f)
    }

    /// Zero the endpoint values and tag the function as Dirichlet.
    pub fn into_dirichlet(mut self) -> Result<Self> {
        let n = self.grid.as_interval()?.num_points();
        let d = self.dim;
        self.values[..d].fill(0.0);
        self.values[(n - 1) * d..].fill(0.0);
        self.dirichlet = true;
        Ok(self)
    }

    fn check_endpoints(&self) -> Result<()> {
        let d = self.dim;
        let n = self.grid.len();
        let first = self.values[..d].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let last = self.values[(n - 1) * d..]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if first != 0.0 || last != 0.0 {
            return Err(FracError::NonDirichlet { first, last });
        }
        Ok(())
    }

    /// Dirichlet tag check used by the interval functional.
    pub fn require_dirichlet(&self) -> Result<()> {
        self.grid.as_interval()?;
        self.check_endpoints()
    }

    pub fn is_dirichlet(&self) -> bool {
        self.dirichlet
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().skip(c).step_by(self.dim).copied().collect()
    }

    pub fn set_component(&mut self, c: usize, data: &[f64]) {
        for (j, v) in data.iter().enumerate() {
            self.values[j * self.dim + c] = *v;
        }
    }

    pub fn same_space(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid || self.dim != other.dim {
            return Err(FracError::GridMismatch(format!(
                "grid functions live on different grids or dimensions ({} vs {})",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &GridFunction) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
        out.dirichlet = self.dirichlet && other.dirichlet;
        Ok(out)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (x, y) in out.values.iter_mut().zip(&other.values) {
            *x = a * *x + b * y;
        }
        out.dirichlet = self.dirichlet && other.dirichlet;
        Ok(out)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    /// Pointwise Euclidean magnitude `|u(t_j)|`.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values
            .chunks(self.dim)
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.magnitudes().into_iter().fold(0.0, f64::max)
    }

    /// `∫ |u|^p` with the shared trapezoid weights.
    pub fn lp_power(&self, p: f64) -> f64 {
        weighted_sum(&self.grid, self.magnitudes().into_iter().map(|m| m.powf(p)))
    }

    pub fn l2_norm_sq(&self) -> f64 {
        weighted_sum(
            &self.grid,
            self.values
                .chunks(self.dim)
                .map(|v| v.iter().map(|x| x * x).sum::<f64>()),
        )
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_power(p).powf(1.0 / p)
    }

    /// `∫ (u, v)` with the shared trapezoid weights.
    pub fn l2_inner(&self, other: &GridFunction) -> Result<f64> {
        self.same_space(other)?;
        Ok(weighted_sum(
            &self.grid,
            self.values
                .chunks(self.dim)
                .zip(other.values.chunks(self.dim))
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::RealLineGrid;

    #[test]
    fn rejects_wrong_length_and_nan() {
        let g = RealLineGrid::new(1.0, 8).unwrap();
        assert!(GridFunction::from_values(g, 1, vec![0.0; 7]).is_err());
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(GridFunction::from_values(g, 1, v).is_err());
    }

    #[test]
    fn dirichlet_requires_zero_endpoints() {
        let g = IntervalGrid::new(0.0, 1.0, 5).unwrap();
        assert!(GridFunction::dirichlet(g, 1, vec![0.0, 1.0, 2.0, 1.0, 0.0]).is_ok());
        let err = GridFunction::dirichlet(g, 1, vec![0.0, 1.0, 2.0, 1.0, 1e-300]);
        assert!(matches!(err, Err(FracError::NonDirichlet { .. })));
        let u = GridFunction::from_fn(g, |t| t + 1.0).into_dirichlet().unwrap();
        assert_eq!(u.values()[0], 0.0);
        assert_eq!(u.values()[4], 0.0);
        assert!(u.is_dirichlet());
    }

    #[test]
    fn vector_layout_is_node_major() {
        let g = RealLineGrid::new(1.0, 4).unwrap();
        let u = GridFunction::from_profile(g, &[1.0, -2.0], |t| t);
        assert_eq!(u.at(0), &[-1.0, 2.0]);
        assert_eq!(u.component(1), vec![2.0, 1.0, -0.0, -1.0]);
        assert_eq!(u.magnitudes()[0], 5.0f64.sqrt());
    }
}
