use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::fracops::{check_order, GridFunction, RealLineGrid};
use crate::problem::{NonlinearitySpec, PotentialSpec};

/// Everything that defines the line energy `I_λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub lambda: f64,
    pub potential: PotentialSpec,
    pub nonlinearity: NonlinearitySpec,
    pub grid: RealLineGrid,
    /// Vector dimension `n` of `u(t) ∈ ℝⁿ`.
    pub dim: usize,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            alpha: 0.75,
            lambda: 10.0,
            potential: PotentialSpec::default(),
            nonlinearity: NonlinearitySpec::default(),
            grid: RealLineGrid::new(20.0, 4096).expect("default grid is valid"),
            dim: 1,
        }
    }
}

impl ProblemSpec {
    pub fn check(&self) -> Result<()> {
        check_order(self.alpha)?;
        if self.alpha <= 0.5 {
            return Err(FracError::Domain(format!(
                "the order must lie in (1/2, 1), got {}",
                self.alpha
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(FracError::Config(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.dim == 0 {
            return Err(FracError::Config("vector dimension must be >= 1".into()));
        }
        self.potential.check()?;
        self.nonlinearity.check()
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn varrho(&self) -> f64 {
        self.potential.varrho
    }

    /// Verify that `u` lives on this problem's grid with this dimension.
    pub fn check_function(&self, u: &GridFunction) -> Result<()> {
        let g = u.grid().as_line()?;
        if *g != self.grid || u.dim() != self.dim {
            return Err(FracError::GridMismatch(format!(
                "function on {} nodes of dimension {} does not match the problem grid ({} nodes, dimension {})",
                g.num_points(),
                u.dim(),
                self.grid.num_points(),
                self.dim
            )));
        }
        Ok(())
    }
}
