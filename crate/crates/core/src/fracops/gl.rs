//! Grünwald-Letnikov discretization of the left Riemann-Liouville
//! derivative on an interval, and the stiffness matrix of the interval
//! energy.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::grid::IntervalGrid;
use super::gridfn::GridFunction;
use super::quadrature::quadrature_weights;
use super::spectral::check_order;
use crate::error::{FracError, Result};

/// `w_j = (-1)^j binom(α, j)` for `j = 0..len`.
pub fn gl_weights(alpha: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    let mut prev = 1.0;
    for j in 0..len {
        if j > 0 {
            prev *= (j as f64 - 1.0 - alpha) / j as f64;
        }
        w.push(prev);
    }
    w
}

/// Dense lower-triangular GL matrix `B_{ij} = h^{-α} w_{i-j}` over all nodes.
pub fn gl_matrix(grid: &IntervalGrid, alpha: f64) -> Result<DMatrix<f64>> {
    check_order(alpha)?;
    let n = grid.num_points();
    let w = gl_weights(alpha, n);
    let s = grid.spacing().powf(-alpha);
    Ok(DMatrix::from_fn(n, n, |i, j| if j <= i { s * w[i - j] } else { 0.0 }))
}

/// Left RL derivative `_aD_t^α u` by GL sums, componentwise.
pub fn grunwald_left_rl(u: &GridFunction, alpha: f64) -> Result<GridFunction> {
    check_order(alpha)?;
    let grid = *u.grid().as_interval()?;
    let n = grid.num_points();
    let w = gl_weights(alpha, n);
    let s = grid.spacing().powf(-alpha);
    let d = u.dim();
    let x = u.values();
    let mut out = vec![0.0; n * d];
    for i in 0..n {
        for c in 0..d {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += w[j] * x[(i - j) * d + c];
            }
            out[i * d + c] = s * acc;
        }
    }
    GridFunction::from_values(grid, d, out)
}

/// Symmetric positive-definite stiffness `A = B_Iᵀ Q B_I` on the interior
/// nodes, where `B_I` keeps the interior columns of the GL matrix and `Q`
/// holds the trapezoid weights, so that `uᵀ A u = ∫ |_aD^α u|²` for
/// Dirichlet `u`. Carries its Cholesky factor for metric solves.
#[derive(Debug, Clone)]
pub struct StiffnessMatrix {
    grid: IntervalGrid,
    alpha: f64,
    matrix: DMatrix<f64>,
    cholesky: Cholesky<f64, Dyn>,
}

pub fn interval_stiffness(grid: &IntervalGrid, alpha: f64) -> Result<StiffnessMatrix> {
    StiffnessMatrix::new(grid, alpha)
}

impl StiffnessMatrix {
    pub fn new(grid: &IntervalGrid, alpha: f64) -> Result<Self> {
        check_order(alpha)?;
        let n = grid.num_points();
        if n < 3 {
            return Err(FracError::Config(format!(
                "stiffness needs at least 3 nodes, got {n}"
            )));
        }
        let m = n - 2;
        let w = gl_weights(alpha, n);
        let q = quadrature_weights(&(*grid).into());
        let s2 = grid.spacing().powf(-2.0 * alpha);
        let mut a = DMatrix::zeros(m, m);
        // Node indices k <= l (interior, 1..=n-2); rows i >= l contribute.
        for k in 1..=m {
            for l in k..=m {
                let mut acc = 0.0;
                for i in l..n {
                    acc += q[i] * w[i - k] * w[i - l];
                }
                let v = s2 * acc;
                a[(k - 1, l - 1)] = v;
                a[(l - 1, k - 1)] = v;
            }
        }
        let cholesky = Cholesky::new(a.clone()).ok_or_else(|| {
            FracError::Inconsistency("interval stiffness is not positive definite".into())
        })?;
        Ok(Self {
            grid: *grid,
            alpha,
            matrix: a,
            cholesky,
        })
    }

    pub fn grid(&self) -> &IntervalGrid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn interior_len(&self) -> usize {
        self.matrix.nrows()
    }

    /// `A x` for one interior component vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x);
        (&self.matrix * v).as_slice().to_vec()
    }

    /// `A⁻¹ b` via the cached Cholesky factor.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(b);
        self.cholesky.solve(&v).as_slice().to_vec()
    }

    /// `Σ_c xᵀ_c A y_c` over components of two Dirichlet grid functions.
    pub fn bilinear(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        u.same_space(v)?;
        if u.grid().as_interval()? != &self.grid {
            return Err(FracError::GridMismatch(
                "grid function does not live on the stiffness grid".into(),
            ));
        }
        let mut acc = 0.0;
        for c in 0..u.dim() {
            let x = interior(u, c);
            let y = interior(v, c);
            let ay = self.apply(&y);
            acc += x.iter().zip(&ay).map(|(a, b)| a * b).sum::<f64>();
        }
        Ok(acc)
    }
}

/// Interior samples of component `c`.
pub(crate) fn interior(u: &GridFunction, c: usize) -> Vec<f64> {
    let all = u.component(c);
    all[1..all.len() - 1].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::special::gamma;

    #[test]
    fn weights_recurrence() {
        let w = gl_weights(0.5, 4);
        assert_eq!(w[0], 1.0);
        assert_eq!(w[1], -0.5);
        assert!((w[2] + 0.125).abs() < 1e-16);
        assert!((w[3] + 0.0625).abs() < 1e-16);
        let sum: f64 = gl_weights(0.7, 20000).iter().sum();
        assert!(sum > 0.0 && sum < 0.01);
    }

    #[test]
    fn matrix_matches_apply() {
        let g = IntervalGrid::new(0.0, 1.0, 17).unwrap();
        let u = GridFunction::from_fn(g, |t| t * (1.0 - t));
        let b = gl_matrix(&g, 0.6).unwrap();
        let direct = grunwald_left_rl(&u, 0.6).unwrap();
        let x = DVector::from_column_slice(u.values());
        let y = b * x;
        for (a, b) in y.iter().zip(direct.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn three_node_stiffness() {
        let g = IntervalGrid::new(-1.0, 1.0, 3).unwrap();
        let a = 0.7;
        let s = interval_stiffness(&g, a).unwrap();
        let h: f64 = 1.0;
        let expect = h.powf(1.0 - 2.0 * a) * (1.0 + 0.5 * a * a);
        assert!((s.matrix()[(0, 0)] - expect).abs() < 1e-14);
    }

    #[test]
    fn linear_function_oracle() {
        let g = IntervalGrid::new(0.0, 1.0, 2001).unwrap();
        let u = GridFunction::from_fn(g, |t| t);
        let d = grunwald_left_rl(&u, 0.5).unwrap();
        let c = gamma(2.0) / gamma(1.5);
        let j = 1000;
        assert!((d.values()[j] - c * g.node(j).sqrt()).abs() < 2e-3);
    }
}
