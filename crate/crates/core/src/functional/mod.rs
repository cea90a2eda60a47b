//! The energy `I_λ` on the truncated line, its derivative and metric
//! gradient representatives, and the interval energy of the limiting
//! Dirichlet problem.
//!
//! All integrals use the shared trapezoid weights, so algebraic identities
//! between the pieces (such as `I − ½ I'(u)u = ∫H`) hold to round-off.

mod bvp;
mod line;
mod spec;

pub use bvp::{BvpFunctional, BvpSpec};
pub use line::{metric_equivalence, CgOptions, LineFunctional, MetricEquivalence};
pub use spec::ProblemSpec;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fracops::GridFunction;

/// Inner product used to turn `I'(u)` into a grid function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Metric {
    /// `⟨u, v⟩_α`: diagonal in frequency, independent of `λ`.
    #[serde(rename = "h-alpha")]
    HAlpha,
    /// `⟨u, v⟩_{X^{α,λ}}`: the energy's own metric; solved by CG.
    #[default]
    #[serde(rename = "x-alpha-lambda")]
    XAlphaLambda,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::HAlpha => "h-alpha",
            Metric::XAlphaLambda => "x-alpha-lambda",
        }
    }
}

/// A metric representative `g` of the derivative at some `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub g: GridFunction,
    /// Metric norm of `g`, i.e. the dual norm of the derivative.
    pub residual: f64,
    /// Linear-solver iterations spent (0 for direct solves).
    pub iterations: usize,
    /// Solver state reusable as a warm start for nearby `u`.
    pub aux: Option<GridFunction>,
}

/// What the mountain-pass solver needs from an energy.
pub trait VariationalProblem: Sync {
    fn energy(&self, u: &GridFunction) -> Result<f64>;
    /// Norm of `u` in the metric the gradient is taken in.
    fn norm(&self, u: &GridFunction) -> Result<f64>;
    fn gradient(&self, u: &GridFunction, warm: Option<&GridFunction>) -> Result<Gradient>;
    fn metric_name(&self) -> &'static str;
    /// The quadratic part `Q(u)`, with `energy = ½ Q(u) − potential(u)`.
    fn quadratic(&self, u: &GridFunction) -> Result<f64>;
    /// `∫ W(t, u)`.
    fn potential(&self, u: &GridFunction) -> f64;
    /// `∫ (∇W(t, u), v)`.
    fn potential_action(&self, u: &GridFunction, v: &GridFunction) -> Result<f64>;
}

/// `(lhs, rhs, gap)` of `I(u) − ½ I'(u)u = ∫ H(t, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn energy(u: &GridFunction, spec: &ProblemSpec) -> Result<f64> {
    LineFunctional::new(spec)?.energy(u)
}

pub fn derivative_action(u: &GridFunction, v: &GridFunction, spec: &ProblemSpec) -> Result<f64> {
    LineFunctional::new(spec)?.derivative_action(u, v)
}

pub fn gradient_rep(u: &GridFunction, spec: &ProblemSpec, metric: Metric) -> Result<GridFunction> {
    Ok(LineFunctional::new(spec)?.gradient_rep(u, metric, None)?.g)
}

pub fn h_identity(u: &GridFunction, spec: &ProblemSpec) -> Result<HIdentity> {
    h_identity_with(&LineFunctional::new(spec)?, u)
}

pub fn h_identity_with(f: &LineFunctional, u: &GridFunction) -> Result<HIdentity> {
    let lhs = f.energy(u)? - 0.5 * f.derivative_action(u, u)?;
    let rhs = f.h_integral(u);
    Ok(HIdentity {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

pub fn bvp_energy(u: &GridFunction, spec: &BvpSpec) -> Result<f64> {
    BvpFunctional::new(spec)?.energy(u)
}

pub fn bvp_derivative_action(u: &GridFunction, v: &GridFunction, spec: &BvpSpec) -> Result<f64> {
    BvpFunctional::new(spec)?.derivative_action(u, v)
}

pub fn bvp_h_identity(f: &BvpFunctional, u: &GridFunction) -> Result<HIdentity> {
    let lhs = f.energy(u)? - 0.5 * f.derivative_action(u, u)?;
    let rhs = f.h_integral(u);
    Ok(HIdentity {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(t: f64) -> f64 {
        (-(t / 0.08).powi(2)).exp()
    }

    #[test]
    fn zero_energy_and_gradient() {
        let spec = ProblemSpec::default();
        let f = LineFunctional::new(&spec).unwrap();
        let u = GridFunction::zeros(spec.grid, 1);
        assert_eq!(f.energy(&u).unwrap(), 0.0);
        for m in [Metric::HAlpha, Metric::XAlphaLambda] {
            assert!(f.gradient_rep(&u, m, None).unwrap().g.is_zero());
        }
    }

    #[test]
    fn gradient_satisfies_defining_equation() {
        let spec = ProblemSpec::default();
        let f = LineFunctional::new(&spec).unwrap();
        let u = GridFunction::from_fn(spec.grid, |t| 2.0 * bump(t - 0.1));
        let v = GridFunction::from_fn(spec.grid, |t| (t * 3.0).sin() * (-t * t).exp());
        for m in [Metric::HAlpha, Metric::XAlphaLambda] {
            let g = f.gradient_rep(&u, m, None).unwrap().g;
            let lhs = match m {
                Metric::HAlpha => f.h_inner(&g, &v).unwrap(),
                Metric::XAlphaLambda => f.x_inner(&g, &v).unwrap(),
            };
            let nu = f.derivative_action(&u, &v).unwrap();
            assert!((lhs - nu).abs() <= 1e-8 * (1.0 + nu.abs()), "{m:?}: {lhs} vs {nu}");
        }
    }

    #[test]
    fn h_identity_quartic() {
        let spec = ProblemSpec::default();
        let u = GridFunction::from_fn(spec.grid, |t| 1.5 * bump(t) - 0.4 * bump(t - 1.0));
        let id = h_identity(&u, &spec).unwrap();
        assert!(id.gap <= 1e-10 * (1.0 + id.lhs.abs()));
        assert!((id.rhs - u.lp_power(4.0)).abs() <= 1e-12 * id.rhs);
    }

    #[test]
    fn bvp_energy_matches_stiffness_form() {
        let spec = BvpSpec::on_core(0.75, 0.25, 65, crate::problem::NonlinearitySpec::default(), 1).unwrap();
        let f = BvpFunctional::new(&spec).unwrap();
        let u = GridFunction::from_fn(spec.grid, |t| (1.0 - (t / 0.25).powi(2)).max(0.0))
            .into_dirichlet()
            .unwrap();
        let via_gl = f.bilinear(&u, &u).unwrap();
        let via_a = f.stiffness().unwrap().bilinear(&u, &u).unwrap();
        assert!((via_gl - via_a).abs() <= 1e-12 * via_a);
    }
}
