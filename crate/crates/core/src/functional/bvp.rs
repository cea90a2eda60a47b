use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Gradient, VariationalProblem};
use crate::error::{FracError, Result};
use crate::fracops::{
    check_order, grunwald_left_rl, interior, GridFunction, IntervalGrid, StiffnessMatrix,
};
use crate::problem::NonlinearitySpec;

/// The limiting Dirichlet problem on `[-ϱ, ϱ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvpSpec {
    pub alpha: f64,
    pub nonlinearity: NonlinearitySpec,
    pub grid: IntervalGrid,
    pub dim: usize,
}

impl BvpSpec {
    /// Interval grid `[-ϱ, ϱ]` with `num_points` nodes.
    pub fn on_core(alpha: f64, varrho: f64, num_points: usize, nonlinearity: NonlinearitySpec, dim: usize) -> Result<Self> {
        Ok(Self {
            alpha,
            nonlinearity,
            grid: IntervalGrid::new(-varrho, varrho, num_points)?,
            dim,
        })
    }

    pub fn check(&self) -> Result<()> {
        check_order(self.alpha)?;
        if self.grid.num_points() < 3 {
            return Err(FracError::Config("the interval grid needs at least 3 nodes".into()));
        }
        if self.dim == 0 {
            return Err(FracError::Config("vector dimension must be >= 1".into()));
        }
        self.nonlinearity.check()
    }

    pub fn varrho(&self) -> f64 {
        0.5 * self.grid.length()
    }
}

/// `I(u) = ½ ∫ |_{-ϱ}D_t^α u|² − ∫ W(t, u)` on Dirichlet grid functions,
/// with the stiffness matrix (and its Cholesky factor) built on first use.
#[derive(Debug)]
pub struct BvpFunctional {
    spec: BvpSpec,
    stiffness: OnceLock<Result<StiffnessMatrix>>,
    nodes: Vec<f64>,
}

impl Clone for BvpFunctional {
    fn clone(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            stiffness: OnceLock::new(),
            nodes: self.nodes.clone(),
        }
    }
}

impl BvpFunctional {
    pub fn new(spec: &BvpSpec) -> Result<Self> {
        spec.check()?;
        Ok(Self {
            nodes: spec.grid.nodes(),
            spec: spec.clone(),
            stiffness: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &BvpSpec {
        &self.spec
    }

    pub fn stiffness(&self) -> Result<&StiffnessMatrix> {
        match self
            .stiffness
            .get_or_init(|| StiffnessMatrix::new(&self.spec.grid, self.spec.alpha))
        {
            Ok(s) => Ok(s),
            Err(e) => Err(FracError::Inconsistency(format!("stiffness assembly failed: {e}"))),
        }
    }

    fn check(&self, u: &GridFunction) -> Result<()> {
        let g = u.grid().as_interval()?;
        if *g != self.spec.grid || u.dim() != self.spec.dim {
            return Err(FracError::GridMismatch(
                "function does not live on the boundary-value grid".into(),
            ));
        }
        u.require_dirichlet()
    }

    /// `∫ (D^α u, D^α v)` with the trapezoid rule, `D^α` the GL operator.
    pub fn bilinear(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        let du = grunwald_left_rl(u, self.spec.alpha)?;
        let dv = if std::ptr::eq(u, v) {
            du.clone()
        } else {
            grunwald_left_rl(v, self.spec.alpha)?
        };
        du.l2_inner(&dv)
    }

    pub fn w_integral(&self, u: &GridFunction) -> f64 {
        let nl = &self.spec.nonlinearity;
        crate::fracops::integrate(u, |t, x| nl.w(t, x))
    }

    pub fn h_integral(&self, u: &GridFunction) -> f64 {
        let nl = &self.spec.nonlinearity;
        crate::fracops::integrate(u, |t, x| nl.h(t, x))
    }

    pub fn grad_w(&self, u: &GridFunction) -> GridFunction {
        let nl = &self.spec.nonlinearity;
        let d = u.dim();
        let mut out = vec![0.0; u.values().len()];
        for ((t, x), o) in self.nodes.iter().zip(u.values().chunks(d)).zip(out.chunks_mut(d)) {
            nl.grad_into(*t, x, o);
        }
        GridFunction::from_values(self.spec.grid, d, out).expect("gradient of finite values")
    }

    pub fn energy(&self, u: &GridFunction) -> Result<f64> {
        Ok(0.5 * self.bilinear(u, u)? - self.w_integral(u))
    }

    pub fn derivative_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        Ok(self.bilinear(u, v)? - self.grad_w(u).l2_inner(v)?)
    }

    /// Interior residual vector `A u − h ∇W(t, u)` of the discrete
    /// Euler–Lagrange equation, per component.
    pub fn el_residual_vectors(&self, u: &GridFunction) -> Result<Vec<Vec<f64>>> {
        self.check(u)?;
        let a = self.stiffness()?;
        let h = self.spec.grid.spacing();
        let gw = self.grad_w(u);
        Ok((0..u.dim())
            .map(|c| {
                let au = a.apply(&interior(u, c));
                au.iter()
                    .zip(interior(&gw, c))
                    .map(|(x, g)| x - h * g)
                    .collect()
            })
            .collect())
    }

    /// Euclidean norm of the Euler–Lagrange residual over interior nodes.
    pub fn el_residual(&self, u: &GridFunction) -> Result<f64> {
        Ok(self
            .el_residual_vectors(u)?
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt())
    }

    /// Euclidean norm of the interior values.
    pub fn interior_euclidean_norm(u: &GridFunction) -> f64 {
        let d = u.dim();
        let n = u.len();
        u.values()[d..(n - 1) * d]
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Representative in the stiffness metric: `A g = A u − h ∇W`, i.e.
    /// `g = u − A⁻¹(h ∇W)` on the interior, zero at the endpoints.
    pub fn gradient_rep(&self, u: &GridFunction) -> Result<Gradient> {
        self.check(u)?;
        let a = self.stiffness()?;
        let h = self.spec.grid.spacing();
        let gw = self.grad_w(u);
        let mut g = GridFunction::zeros(self.spec.grid, u.dim());
        let mut res2 = 0.0;
        for c in 0..u.dim() {
            let ui = interior(u, c);
            let rhs: Vec<f64> = interior(&gw, c).iter().map(|x| h * x).collect();
            let z = a.solve(&rhs);
            let gi: Vec<f64> = ui.iter().zip(&z).map(|(x, y)| x - y).collect();
            let agi = a.apply(&gi);
            res2 += gi.iter().zip(&agi).map(|(x, y)| x * y).sum::<f64>();
            let mut full = vec![0.0; u.len()];
            full[1..u.len() - 1].copy_from_slice(&gi);
            g.set_component(c, &full);
        }
        Ok(Gradient {
            g,
            residual: res2.max(0.0).sqrt(),
            iterations: 0,
            aux: None,
        })
    }
}

impl VariationalProblem for BvpFunctional {
    fn energy(&self, u: &GridFunction) -> Result<f64> {
        BvpFunctional::energy(self, u)
    }

    fn norm(&self, u: &GridFunction) -> Result<f64> {
        Ok(self.bilinear(u, u)?.max(0.0).sqrt())
    }

    fn gradient(&self, u: &GridFunction, _warm: Option<&GridFunction>) -> Result<Gradient> {
        self.gradient_rep(u)
    }

    fn metric_name(&self) -> &'static str {
        "stiffness"
    }

    fn quadratic(&self, u: &GridFunction) -> Result<f64> {
        self.bilinear(u, u)
    }

    fn potential(&self, u: &GridFunction) -> f64 {
        self.w_integral(u)
    }

    fn potential_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.grad_w(u).l2_inner(v)
    }
}
