use serde::{Deserialize, Serialize};

use super::spec::ProblemSpec;
use super::{Gradient, Metric, VariationalProblem};
use crate::error::{FracError, Result};
use crate::fracops::{abs_power_multiplier, apply_real_multiplier, weighted_pairing, GridFunction};

/// Linear-solve settings for the `X^{α,λ}` gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgOptions {
    /// Relative residual target `‖b - Az‖ ≤ tol ‖b‖`.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_iters: 2000,
        }
    }
}

/// The line energy with its operator data precomputed:
///
/// ```text
/// I_λ(u) = ½ ∫|ω|^{2α}|û|² + ½ λ ∫(L u, u) − ∫ W(t, u)
/// ```
#[derive(Debug, Clone)]
pub struct LineFunctional {
    spec: ProblemSpec,
    metric: Metric,
    cg: CgOptions,
    /// `|ω_k|^{2α}`.
    symbol: Vec<f64>,
    /// `λ l(t_j) f_c`, node-major like the grid-function values.
    lambda_pot: Vec<f64>,
    /// Per-component mean of `lambda_pot`, used by the preconditioner.
    pot_mean: Vec<f64>,
    nodes: Vec<f64>,
    h: f64,
}

impl LineFunctional {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        Self::with_metric(spec, Metric::default(), CgOptions::default())
    }

    pub fn with_metric(spec: &ProblemSpec, metric: Metric, cg: CgOptions) -> Result<Self> {
        spec.check()?;
        let grid = spec.grid;
        let nodes = grid.nodes();
        let d = spec.dim;
        let mut lambda_pot = Vec::with_capacity(nodes.len() * d);
        for &t in &nodes {
            lambda_pot.extend(spec.potential.diagonal(t, d).into_iter().map(|x| spec.lambda * x));
        }
        let pot_mean = (0..d)
            .map(|c| {
                lambda_pot.iter().skip(c).step_by(d).sum::<f64>() / nodes.len() as f64
            })
            .collect();
        Ok(Self {
            symbol: abs_power_multiplier(&grid, 2.0 * spec.alpha),
            h: grid.spacing(),
            spec: spec.clone(),
            metric,
            cg,
            lambda_pot,
            pot_mean,
            nodes,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    fn check(&self, u: &GridFunction) -> Result<()> {
        self.spec.check_function(u)
    }

    /// `Σ_j h λ (L(t_j)u_j, v_j)`.
    fn pot_pairing(&self, u: &GridFunction, v: &GridFunction) -> f64 {
        let acc: f64 = self
            .lambda_pot
            .iter()
            .zip(u.values())
            .zip(v.values())
            .map(|((l, a), b)| l * a * b)
            .sum();
        acc * self.h
    }

    /// `‖u‖²_{X^{α,λ}}`.
    pub fn x_norm_sq(&self, u: &GridFunction) -> Result<f64> {
        self.check(u)?;
        Ok(weighted_pairing(u, u, &self.symbol)? + self.pot_pairing(u, u))
    }

    /// `⟨u, v⟩_{X^{α,λ}}`.
    pub fn x_inner(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        Ok(weighted_pairing(u, v, &self.symbol)? + self.pot_pairing(u, v))
    }

    /// `⟨u, v⟩_α = ∫(u, v) + ∫|ω|^{2α} Re(û conj v̂)`.
    pub fn h_inner(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        Ok(u.l2_inner(v)? + weighted_pairing(u, v, &self.symbol)?)
    }

    /// `∫ W(t, u)`.
    pub fn w_integral(&self, u: &GridFunction) -> f64 {
        let nl = &self.spec.nonlinearity;
        let d = u.dim();
        self.nodes
            .iter()
            .zip(u.values().chunks(d))
            .map(|(t, x)| nl.w(*t, x))
            .sum::<f64>()
            * self.h
    }

    /// `∫ H(t, u)`.
    pub fn h_integral(&self, u: &GridFunction) -> f64 {
        let nl = &self.spec.nonlinearity;
        let d = u.dim();
        self.nodes
            .iter()
            .zip(u.values().chunks(d))
            .map(|(t, x)| nl.h(*t, x))
            .sum::<f64>()
            * self.h
    }

    /// Nodal `∇W(t_j, u_j)`.
    pub fn grad_w(&self, u: &GridFunction) -> GridFunction {
        let nl = &self.spec.nonlinearity;
        let d = u.dim();
        let mut out = vec![0.0; u.values().len()];
        for ((t, x), o) in self.nodes.iter().zip(u.values().chunks(d)).zip(out.chunks_mut(d)) {
            nl.grad_into(*t, x, o);
        }
        GridFunction::from_values(self.spec.grid, d, out).expect("gradient of finite values")
    }

    /// `∫ (∇W(t, u), v)`.
    pub fn grad_w_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.grad_w(u).l2_inner(v)
    }

    pub fn energy(&self, u: &GridFunction) -> Result<f64> {
        Ok(0.5 * self.x_norm_sq(u)? - self.w_integral(u))
    }

    /// `I'_λ(u) v = ⟨u, v⟩_{X^{α,λ}} − ∫ (∇W(t,u), v)`.
    pub fn derivative_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        Ok(self.x_inner(u, v)? - self.grad_w_action(u, v)?)
    }

    /// `(K + λL) z` with `K` the `|ω|^{2α}` multiplier.
    fn apply_x_operator(&self, z: &GridFunction) -> Result<GridFunction> {
        let mut kz = apply_real_multiplier(z, &self.symbol)?;
        let vals: Vec<f64> = kz
            .values()
            .iter()
            .zip(z.values())
            .zip(&self.lambda_pot)
            .map(|((k, x), l)| k + l * x)
            .collect();
        kz = GridFunction::from_values(self.spec.grid, z.dim(), vals)?;
        Ok(kz)
    }

    fn precondition(&self, r: &GridFunction) -> Result<GridFunction> {
        let d = r.dim();
        let mut out = GridFunction::zeros(self.spec.grid, d);
        for c in 0..d {
            let one = GridFunction::from_values(self.spec.grid, 1, r.component(c))?;
            let inv: Vec<f64> = self
                .symbol
                .iter()
                .map(|m| 1.0 / (m + self.pot_mean[c]))
                .collect();
            out.set_component(c, apply_real_multiplier(&one, &inv)?.values());
        }
        Ok(out)
    }

    /// Preconditioned CG for `(K + λL) z = b` in the Euclidean nodal inner
    /// product. Returns the solution and the iteration count.
    pub fn solve_x_operator(&self, b: &GridFunction, guess: Option<&GridFunction>) -> Result<(GridFunction, usize)> {
        let dot = |a: &GridFunction, b: &GridFunction| -> f64 {
            a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()
        };
        let bnorm = dot(b, b).sqrt();
        if bnorm == 0.0 {
            return Ok((GridFunction::zeros(self.spec.grid, b.dim()), 0));
        }
        let mut z = match guess {
            Some(g) => g.clone(),
            None => GridFunction::zeros(self.spec.grid, b.dim()),
        };
        let mut r = b.sub(&self.apply_x_operator(&z)?)?;
        if dot(&r, &r).sqrt() <= self.cg.tol * bnorm {
            return Ok((z, 0));
        }
        let mut y = self.precondition(&r)?;
        let mut p = y.clone();
        let mut ry = dot(&r, &y);
        for it in 1..=self.cg.max_iters {
            let ap = self.apply_x_operator(&p)?;
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(FracError::Solver {
                    iterations: it,
                    residual: dot(&r, &r).sqrt() / bnorm,
                });
            }
            let a = ry / pap;
            z = z.axpy(a, &p)?;
            r = r.axpy(-a, &ap)?;
            let rn = dot(&r, &r).sqrt();
            if rn <= self.cg.tol * bnorm {
                return Ok((z, it));
            }
            y = self.precondition(&r)?;
            let ry_new = dot(&r, &y);
            p = y.combine(1.0, &p, ry_new / ry)?;
            ry = ry_new;
        }
        let rn = dot(&r, &r).sqrt();
        Err(FracError::Solver {
            iterations: self.cg.max_iters,
            residual: rn / bnorm,
        })
    }

    /// Representative `g` of `I'_λ(u)` in the given metric:
    /// `⟨g, v⟩_metric = I'_λ(u) v` for every grid function `v`.
    ///
    /// * `H^α`: diagonal in frequency, `ĝ = (|ω|^{2α} û + ŝ)/(1 + |ω|^{2α})`
    ///   with `s = λLu − ∇W(t, u)`.
    /// * `X^{α,λ}`: `(K + λL) g = (K + λL) u − ∇W`, i.e.
    ///   `g = u − (K + λL)⁻¹ ∇W`, solved by preconditioned CG.
    pub fn gradient_rep(&self, u: &GridFunction, metric: Metric, guess: Option<&GridFunction>) -> Result<Gradient> {
        self.check(u)?;
        let gw = self.grad_w(u);
        match metric {
            Metric::HAlpha => {
                let d = u.dim();
                let s_vals: Vec<f64> = self
                    .lambda_pot
                    .iter()
                    .zip(u.values())
                    .zip(gw.values())
                    .map(|((l, x), g)| l * x - g)
                    .collect();
                let s = GridFunction::from_values(self.spec.grid, d, s_vals)?;
                // g = [K/(1+K)] u + [1/(1+K)] s
                let a: Vec<f64> = self.symbol.iter().map(|m| m / (1.0 + m)).collect();
                let b: Vec<f64> = self.symbol.iter().map(|m| 1.0 / (1.0 + m)).collect();
                let g = apply_real_multiplier(u, &a)?.axpy(1.0, &apply_real_multiplier(&s, &b)?)?;
                let residual = self.h_inner(&g, &g)?.max(0.0).sqrt();
                Ok(Gradient {
                    g,
                    residual,
                    iterations: 0,
                    aux: None,
                })
            }
            Metric::XAlphaLambda => {
                let (z, iterations) = self.solve_x_operator(&gw, guess)?;
                let g = u.sub(&z)?;
                let residual = self.x_norm_sq(&g)?.max(0.0).sqrt();
                Ok(Gradient {
                    g,
                    residual,
                    iterations,
                    aux: Some(z),
                })
            }
        }
    }

    /// `‖g‖²` in the given metric.
    pub fn metric_norm_sq(&self, g: &GridFunction, metric: Metric) -> Result<f64> {
        match metric {
            Metric::HAlpha => self.h_inner(g, g),
            Metric::XAlphaLambda => self.x_norm_sq(g),
        }
    }
}

/// Dual norm of `I'_λ(u)` in both metrics, with the equivalence constant
/// `√(1 + 1/Θ)` that bounds the `X`-dual norm by the `H^α`-dual norm when
/// `λ ≥ λ_floor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEquivalence {
    pub h_alpha: f64,
    pub x_alpha_lambda: f64,
    pub bound_constant: f64,
    /// `x_alpha_lambda / (bound_constant · h_alpha)`; at most 1 when the
    /// equivalence applies.
    pub ratio: f64,
}

pub fn metric_equivalence(f: &LineFunctional, u: &GridFunction, theta: f64) -> Result<MetricEquivalence> {
    let h = f.gradient_rep(u, Metric::HAlpha, None)?.residual;
    let x = f.gradient_rep(u, Metric::XAlphaLambda, None)?.residual;
    let c = (1.0 + 1.0 / theta).sqrt();
    Ok(MetricEquivalence {
        h_alpha: h,
        x_alpha_lambda: x,
        bound_constant: c,
        ratio: if h == 0.0 { 0.0 } else { x / (c * h) },
    })
}

impl VariationalProblem for LineFunctional {
    fn energy(&self, u: &GridFunction) -> Result<f64> {
        LineFunctional::energy(self, u)
    }

    fn norm(&self, u: &GridFunction) -> Result<f64> {
        Ok(self.metric_norm_sq(u, self.metric)?.max(0.0).sqrt())
    }

    fn gradient(&self, u: &GridFunction, warm: Option<&GridFunction>) -> Result<Gradient> {
        self.gradient_rep(u, self.metric, warm)
    }

    fn metric_name(&self) -> &'static str {
        self.metric.name()
    }

    fn quadratic(&self, u: &GridFunction) -> Result<f64> {
        self.x_norm_sq(u)
    }

    fn potential(&self, u: &GridFunction) -> f64 {
        self.w_integral(u)
    }

    fn potential_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64> {
        self.grad_w_action(u, v)
    }
}

