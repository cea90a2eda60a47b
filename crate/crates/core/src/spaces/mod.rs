//! Norms, inner products and embedding constants, with a randomized
//! verifier for the inequalities that tie them together.

mod constants;
mod samples;
mod verify;

pub use constants::{
    continuum_c_infinity, estimate_c_infinity, exact_c_infinity, EmbeddingConstants, KappaEntry,
};
pub use samples::{draw_interval_sample, draw_line_sample, Mode, Sample, SampleFamily, Term};
pub use verify::{
    inequality_ratios, verify_embeddings, EmbeddingReport, InequalityRecord, VerifyOptions,
    RATIO_SLACK,
};

use crate::error::Result;
use crate::fracops::{integrate, quadratic_form_alpha, spectral_pairing, GridFunction};
use crate::functional::ProblemSpec;
use crate::problem::PotentialSpec;

/// `‖u‖_α = (∫|u|² + ∫|ω|^{2α}|û|²)^{1/2}`.
pub fn norm_h_alpha(u: &GridFunction, alpha: f64) -> Result<f64> {
    Ok((u.l2_norm_sq() + quadratic_form_alpha(u, alpha)?).sqrt())
}

/// `∫ (L(t)u, v) dt`.
pub fn potential_pairing(u: &GridFunction, v: &GridFunction, potential: &PotentialSpec) -> Result<f64> {
    u.same_space(v)?;
    let grid = u.grid();
    Ok(crate::fracops::weighted_sum(
        grid,
        (0..grid.len()).map(|j| potential.pair(grid.node(j), u.at(j), v.at(j))),
    ))
}

/// `∫ (L(t)u, u) dt`.
pub fn potential_energy(u: &GridFunction, potential: &PotentialSpec) -> f64 {
    integrate(u, |t, x| potential.quad(t, x))
}

/// `⟨u, v⟩_{X^{α,λ}} = ∫ (D^α u, D^α v) + λ ∫ (L u, v)`.
pub fn inner_x_lambda(u: &GridFunction, v: &GridFunction, spec: &ProblemSpec) -> Result<f64> {
    spec.check_function(u)?;
    spec.check_function(v)?;
    Ok(spectral_pairing(u, v, spec.alpha)? + spec.lambda * potential_pairing(u, v, &spec.potential)?)
}

pub fn norm_x_lambda(u: &GridFunction, spec: &ProblemSpec) -> Result<f64> {
    Ok(inner_x_lambda(u, u, spec)?.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::RealLineGrid;

    #[test]
    fn x_norm_without_potential_is_quadratic_form() {
        let mut spec = ProblemSpec::default();
        spec.potential.profile = crate::problem::Profile::Tabulated {
            t: vec![-1.0, 1.0],
            l: vec![0.0, 0.0],
        };
        let u = GridFunction::from_fn(spec.grid, |t| (-t * t).exp());
        let q = quadratic_form_alpha(&u, spec.alpha).unwrap();
        assert_eq!(inner_x_lambda(&u, &u, &spec).unwrap(), q);
    }

    #[test]
    fn zero_norms() {
        let g = RealLineGrid::new(10.0, 256).unwrap();
        let u = GridFunction::zeros(g, 1);
        assert_eq!(norm_h_alpha(&u, 0.7).unwrap(), 0.0);
    }
}
