use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::norm_h_alpha;
use super::samples::{draw_line_sample, SampleFamily};
use crate::error::{FracError, Result};
use crate::exec::Exec;
use crate::fracops::{abs_power_multiplier, check_order, RealLineGrid};
use crate::functional::ProblemSpec;

/// Best constant of `sup|u| ≤ C ‖u‖_α` on the grid.
///
/// Writing `u_j = N⁻¹ Σ_k DFT_k e^{2πijk/N}` and `‖u‖²_α = (h/N) Σ_k
/// (1 + |ω_k|^{2α}) |DFT_k|²`, Cauchy–Schwarz gives
/// `C² = (N h)⁻¹ Σ_k 1/(1 + |ω_k|^{2α})`, attained by the inverse transform
/// of `1/(1 + |ω|^{2α})`. This is the exact discrete analogue of the
/// continuum constant and makes every downstream bound sharp on the grid.
pub fn exact_c_infinity(alpha: f64, grid: &RealLineGrid) -> Result<f64> {
    check_order(alpha)?;
    let s: f64 = abs_power_multiplier(grid, 2.0 * alpha)
        .into_iter()
        .map(|m| 1.0 / (1.0 + m))
        .sum();
    Ok((s / (grid.num_points() as f64 * grid.spacing())).sqrt())
}

/// Continuum value `C² = (2π)⁻¹ ∫ dω/(1 + |ω|^{2α}) = 1/(2α sin(π/(2α)))`.
pub fn continuum_c_infinity(alpha: f64) -> f64 {
    (1.0 / (2.0 * alpha * (PI / (2.0 * alpha)).sin())).sqrt()
}

/// Monte-Carlo lower estimate `max ‖u‖_∞ / ‖u‖_α` over `samples` random
/// line functions cycling through the three sample families.
pub fn estimate_c_infinity(
    alpha: f64,
    grid: &RealLineGrid,
    dim: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<f64> {
    check_order(alpha)?;
    let ratios = exec.map_range(samples, |id| -> Result<f64> {
        let family = SampleFamily::ALL[id % 3];
        let u = draw_line_sample(seed, id as u64, family, grid, dim).render_line(grid, dim);
        let n = norm_h_alpha(&u, alpha)?;
        Ok(if n > 0.0 { u.sup_norm() / n } else { 0.0 })
    });
    ratios
        .into_iter()
        .try_fold(0.0f64, |m, r| Ok(m.max(r?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaEntry {
    pub p: f64,
    pub kappa: f64,
}

/// The constants linking the `H^α`, `X^{α,λ}` and `L^p` norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConstants {
    pub alpha: f64,
    /// Sup-embedding constant used downstream.
    pub c_infinity: f64,
    /// How `c_infinity` was obtained (`exact-discrete` or `forced`).
    pub c_infinity_source: String,
    pub c_infinity_continuum: f64,
    /// Monte-Carlo lower estimate, when one was run.
    pub c_infinity_estimate: Option<f64>,
    pub estimate_samples: usize,
    /// `meas{l < c}`.
    pub meas_lc: f64,
    pub threshold: f64,
    /// `Θ = (1 - C²m)/(C²m)`.
    pub theta: f64,
    /// `𝒦_p` with `𝒦_p^p = Θ^{-p/2} m^{-(p-2)/2}`.
    pub kappa_p: Vec<KappaEntry>,
    /// `1/(c C² m)`: smallest λ for which the `X^{α,λ}` bounds hold.
    pub lambda_floor: f64,
}

impl EmbeddingConstants {
    /// Build from an explicit sup constant. Fails when the sublevel-measure
    /// condition `m < 1/C²` does not hold.
    pub fn from_parts(
        alpha: f64,
        c_infinity: f64,
        meas_lc: f64,
        threshold: f64,
        exponents: &[f64],
    ) -> Result<Self> {
        let c2m = c_infinity * c_infinity * meas_lc;
        if !(c2m < 1.0) {
            return Err(FracError::Hypothesis {
                name: "potential_sublevel_measure".into(),
                witness: format!(
                    "meas{{l < c}} = {meas_lc} is not below 1/C_inf^2 = {}",
                    1.0 / (c_infinity * c_infinity)
                ),
            });
        }
        if !(meas_lc > 0.0) {
            return Err(FracError::Hypothesis {
                name: "potential_sublevel_measure".into(),
                witness: "sublevel set {l < c} is empty on the grid".into(),
            });
        }
        let theta = (1.0 - c2m) / c2m;
        let mut out = Self {
            alpha,
            c_infinity,
            c_infinity_source: "forced".into(),
            c_infinity_continuum: continuum_c_infinity(alpha),
            c_infinity_estimate: None,
            estimate_samples: 0,
            meas_lc,
            threshold,
            theta,
            kappa_p: Vec::new(),
            lambda_floor: 1.0 / (threshold * c2m),
        };
        for &p in exponents {
            out.add_exponent(p);
        }
        Ok(out)
    }

    /// Constants for a problem, with the exact discrete sup constant and
    /// `𝒦_p` stored for `p = 2`, the nonlinearity exponent and the growth
    /// exponent.
    pub fn for_spec(spec: &ProblemSpec) -> Result<Self> {
        spec.check()?;
        let c = exact_c_infinity(spec.alpha, &spec.grid)?;
        let meas = spec.potential.sublevel_measure(&spec.grid);
        let ps = [
            2.0,
            spec.nonlinearity.p(),
            spec.nonlinearity.growth_exponent(),
        ];
        let mut out = Self::from_parts(spec.alpha, c, meas, spec.potential.threshold, &ps)?;
        out.c_infinity_source = "exact-discrete".into();
        Ok(out)
    }

    pub fn add_exponent(&mut self, p: f64) {
        if p.is_finite() && p >= 2.0 && !self.kappa_p.iter().any(|e| e.p == p) {
            let kappa = self.kappa(p);
            self.kappa_p.push(KappaEntry { p, kappa });
        }
    }

    /// `𝒦_p = (Θ^{-p/2} m^{-(p-2)/2})^{1/p}`.
    pub fn kappa(&self, p: f64) -> f64 {
        self.kappa_pow(p).powf(1.0 / p)
    }

    /// `𝒦_p^p`.
    pub fn kappa_pow(&self, p: f64) -> f64 {
        1.0 / (self.theta.powf(p / 2.0) * self.meas_lc.powf((p - 2.0) / 2.0))
    }

    pub fn with_estimate(mut self, estimate: f64, samples: usize) -> Self {
        self.c_infinity_estimate = Some(estimate);
        self.estimate_samples = samples;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_constant_approaches_continuum() {
        let g = RealLineGrid::new(20.0, 4096).unwrap();
        let c = exact_c_infinity(0.75, &g).unwrap();
        let cc = continuum_c_infinity(0.75);
        // The discrete sum stops at |ω| = π/h and misses a tail ~ h^{2α-1}.
        assert!(c < cc);
        assert!(1.0 - c / cc < 0.05);
    }

    #[test]
    fn theta_and_kappa_formulas() {
        let k = EmbeddingConstants::from_parts(0.75, 0.5, 1.0, 2.0, &[4.0]).unwrap();
        assert!((k.theta - 3.0).abs() < 1e-15);
        assert!((k.lambda_floor - 2.0).abs() < 1e-15);
        assert!((k.kappa_p[0].kappa.powi(4) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn measure_condition_enforced() {
        assert!(EmbeddingConstants::from_parts(0.75, 1.0, 1.0, 1.0, &[]).is_err());
    }

    #[test]
    fn default_spec_is_admissible() {
        let k = EmbeddingConstants::for_spec(&ProblemSpec::default()).unwrap();
        assert!(k.theta > 0.0);
        assert!(k.lambda_floor < 1.0);
    }
}
