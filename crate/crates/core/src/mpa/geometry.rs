use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::fracops::special::gamma;
use crate::fracops::{quadratic_form_alpha, GridFunction};
use crate::functional::{BvpFunctional, BvpSpec, LineFunctional, ProblemSpec, VariationalProblem};
use crate::problem::{eval_grad_w, growth_constant, NonlinearitySpec};
use crate::spaces::EmbeddingConstants;

/// Largest doubling factor tried when looking for negative energy.
pub const SIGMA_CAP: f64 = 1.152_921_504_606_847e18; // 2^60

/// Everything the mountain-pass iteration needs: the bump `ψ`, the far
/// endpoint `e = σ₀ψ` and the sphere `(ρ, η)` every path has to cross.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MountainPassSetup {
    pub psi: GridFunction,
    /// Support half-width of `psi`.
    pub tau: f64,
    pub sigma0: f64,
    pub e: GridFunction,
    pub energy_e: f64,
    /// Norm of `e` in the energy space.
    pub norm_e: f64,
    pub rho: f64,
    pub eta: f64,
    pub epsilon_c: f64,
    pub c_eps: f64,
    /// Exponent `p` in the growth bound `|∇W| ≤ ε|u| + C_ε|u|^{p-1}`.
    pub growth_exponent: f64,
}

impl MountainPassSetup {
    /// Replay the invariants: `‖e‖ > ρ`, `I(e) < 0`, `η > 0`.
    pub fn check(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.rho > 0.0) {
            return Err(FracError::Inconsistency(format!(
                "mountain-pass floor must be positive (rho = {}, eta = {})",
                self.rho, self.eta
            )));
        }
        if !(self.energy_e < 0.0) {
            return Err(FracError::Inconsistency(format!(
                "far endpoint has nonnegative energy {}",
                self.energy_e
            )));
        }
        if !(self.norm_e > self.rho) {
            return Err(FracError::Inconsistency(format!(
                "far endpoint norm {} does not exceed rho = {}",
                self.norm_e, self.rho
            )));
        }
        Ok(())
    }
}

/// Overrides for the constants of the lower energy estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GeometryOptions {
    /// `ε` in the growth bound; defaults to half of the coercivity margin.
    pub epsilon_c: Option<f64>,
    /// `C_ε`; defaults to the tightest value observed by
    /// [`growth_constant`].
    pub c_eps: Option<f64>,
}

/// Scan `ρ = 10^{j/100}`, `j = -800..=800`, for the largest radius with
/// `a − b ρ^{p-2} > 0`, and return `(ρ, ρ²(a − b ρ^{p-2}))`.
pub fn rho_eta_scan(a: f64, b: f64, p: f64) -> Result<(f64, f64)> {
    let bracket = |rho: f64| a - b * rho.powf(p - 2.0);
    let best = (-800..=800)
        .map(|j| 10f64.powf(j as f64 / 100.0))
        .filter(|&rho| bracket(rho) > 0.0)
        .last();
    match best {
        Some(rho) => Ok((rho, rho * rho * bracket(rho))),
        None => Err(FracError::Geometry {
            bracket_at_min: bracket(1e-8),
        }),
    }
}

/// `(ρ, η)` for the line energy from
///
/// ```text
/// I(u) ≥ ‖u‖² [ ½(1 − ε/Θ) − C_ε/(p Θ^{p/2} m^{(p-2)/2}) ‖u‖^{p-2} ]
/// ```
///
/// which follows from `W ≤ ε|u|²/2 + C_ε|u|^p/p` and the `X^{α,λ}`
/// embeddings (valid for `λ ≥ λ_floor`).
pub fn estimate_rho_eta(spec: &ProblemSpec, epsilon_c: f64, c_eps: f64, p: f64) -> Result<(f64, f64)> {
    let k = EmbeddingConstants::for_spec(spec)?;
    if spec.lambda < k.lambda_floor {
        return Err(FracError::Hypothesis {
            name: "lambda_floor".into(),
            witness: format!("lambda = {} is below lambda_floor = {}", spec.lambda, k.lambda_floor),
        });
    }
    rho_eta_from_constants(k.theta, k.meas_lc, epsilon_c, c_eps, p)
}

pub fn rho_eta_from_constants(theta: f64, meas: f64, epsilon_c: f64, c_eps: f64, p: f64) -> Result<(f64, f64)> {
    if !(epsilon_c >= 0.0 && epsilon_c < theta) {
        return Err(FracError::Config(format!(
            "epsilon_c = {epsilon_c} must lie in [0, Theta = {theta})"
        )));
    }
    if !(p > 2.0 && c_eps >= 0.0) {
        return Err(FracError::Config(format!(
            "growth bound needs p > 2 and C_eps >= 0 (got p = {p}, C_eps = {c_eps})"
        )));
    }
    let a = 0.5 * (1.0 - epsilon_c / theta);
    let b = c_eps / (p * theta.powf(p / 2.0) * meas.powf((p - 2.0) / 2.0));
    rho_eta_scan(a, b, p)
}

/// `(1 − (t/τ)²)³₊`.
pub fn polynomial_bump(t: f64, tau: f64) -> f64 {
    let s = 1.0 - (t / tau).powi(2);
    if s > 0.0 {
        s * s * s
    } else {
        0.0
    }
}

fn first_axis(dim: usize) -> Vec<f64> {
    let mut d = vec![0.0; dim];
    d[0] = 1.0;
    d
}

/// Double `σ` from 1 until `I(σψ) < 0` and `‖σψ‖ > ρ`.
fn double_until_negative<P: VariationalProblem>(
    problem: &P,
    psi: &GridFunction,
    rho: f64,
    norm: impl Fn(&GridFunction) -> Result<f64>,
) -> Result<(f64, GridFunction, f64, f64)> {
    let mut sigma = 1.0;
    loop {
        let e = psi.scaled(sigma);
        let energy = problem.energy(&e)?;
        let n = norm(&e)?;
        if energy < 0.0 && n > rho {
            return Ok((sigma, e, energy, n));
        }
        sigma *= 2.0;
        if sigma > SIGMA_CAP {
            return Err(FracError::Config(format!(
                "energy along the bump stays nonnegative up to sigma = 2^60 \
                 (last energy {energy}); the nonlinearity is too weak on this grid"
            )));
        }
    }
}

fn default_epsilon(theta_like: f64, opts: &GeometryOptions) -> f64 {
    opts.epsilon_c.unwrap_or(0.5 * theta_like)
}

/// The line setup with default constants: `ε = Θ/2`, `C_ε` observed.
pub fn construct_e(spec: &ProblemSpec, tau: f64) -> Result<MountainPassSetup> {
    construct_e_with(spec, tau, &GeometryOptions::default())
}

pub fn construct_e_with(spec: &ProblemSpec, tau: f64, opts: &GeometryOptions) -> Result<MountainPassSetup> {
    spec.check()?;
    let varrho = spec.varrho();
    if !(tau > 0.0 && tau < varrho) {
        return Err(FracError::Config(format!(
            "bump half-width tau = {tau} must lie in (0, varrho = {varrho})"
        )));
    }
    let k = EmbeddingConstants::for_spec(spec)?;
    let nl = &spec.nonlinearity;
    let epsilon_c = default_epsilon(k.theta, opts);
    let c_eps = opts.c_eps.unwrap_or_else(|| growth_constant(nl, epsilon_c));
    let p = nl.growth_exponent();
    let (rho, eta) = estimate_rho_eta(spec, epsilon_c, c_eps, p)?;

    let f = LineFunctional::new(spec)?;
    let psi = GridFunction::from_profile(spec.grid, &first_axis(spec.dim), |t| polynomial_bump(t, tau));
    let (sigma0, e, energy_e, norm_e) =
        double_until_negative(&f, &psi, rho, |u| Ok(f.x_norm_sq(u)?.max(0.0).sqrt()))?;
    let setup = MountainPassSetup {
        psi,
        tau,
        sigma0,
        e,
        energy_e,
        norm_e,
        rho,
        eta,
        epsilon_c,
        c_eps,
        growth_exponent: p,
    };
    setup.check()?;
    Ok(setup)
}

/// Interval constants `‖u‖₂ ≤ c_P ‖D^α u‖₂` and `‖u‖_∞ ≤ c_S ‖D^α u‖₂`.
fn interval_constants(alpha: f64, len: f64) -> (f64, f64) {
    let c_p = len.powf(alpha) / gamma(alpha + 1.0);
    let c_s = len.powf(alpha - 0.5) / (gamma(alpha) * (2.0 * alpha - 1.0).sqrt());
    (c_p, c_s)
}

/// Interval analogue of [`construct_e`]. The floor comes from
///
/// ```text
/// I(u) ≥ ‖u‖² [ ½(1 − ε c_P²) − (C_ε/p) c_S^{p-2} c_P² ‖u‖^{p-2} ]
/// ```
///
/// with the fractional Poincaré and sup constants of the interval, and
/// `ε = 1/(2 c_P²)` by default.
pub fn construct_e_bvp(spec: &BvpSpec, tau: f64, opts: &GeometryOptions) -> Result<MountainPassSetup> {
    spec.check()?;
    let varrho = spec.varrho();
    if !(tau > 0.0 && tau < varrho) {
        return Err(FracError::Config(format!(
            "bump half-width tau = {tau} must lie in (0, varrho = {varrho})"
        )));
    }
    let (c_p, c_s) = interval_constants(spec.alpha, spec.grid.length());
    let nl = &spec.nonlinearity;
    let epsilon_c = default_epsilon(1.0 / (c_p * c_p), opts);
    if !(epsilon_c >= 0.0 && epsilon_c * c_p * c_p < 1.0) {
        return Err(FracError::Config(format!(
            "epsilon_c = {epsilon_c} must lie in [0, 1/c_P^2 = {})",
            1.0 / (c_p * c_p)
        )));
    }
    let c_eps = opts.c_eps.unwrap_or_else(|| growth_constant(nl, epsilon_c));
    let p = nl.growth_exponent();
    let a = 0.5 * (1.0 - epsilon_c * c_p * c_p);
    let b = c_eps / p * c_s.powf(p - 2.0) * c_p * c_p;
    let (rho, eta) = rho_eta_scan(a, b, p)?;

    let f = BvpFunctional::new(spec)?;
    let psi = GridFunction::from_profile(spec.grid, &first_axis(spec.dim), |t| polynomial_bump(t, tau))
        .into_dirichlet()?;
    let (sigma0, e, energy_e, norm_e) = double_until_negative(&f, &psi, rho, |u| f.norm(u))?;
    let setup = MountainPassSetup {
        psi,
        tau,
        sigma0,
        e,
        energy_e,
        norm_e,
        rho,
        eta,
        epsilon_c,
        c_eps,
        growth_exponent: p,
    };
    setup.check()?;
    Ok(setup)
}

/// Maximizer of `f(s) = ½ s² q − w(s)` over `s > 0`, where `dw = w'`.
///
/// The search brackets the first sign change of `f` and `f'` by doubling,
/// scans 256 equispaced points, then refines the best cell by bisection on
/// `f'` (or golden section when `f'` does not change sign there).
pub fn ray_maximum(q: f64, w: impl Fn(f64) -> f64, dw: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(FracError::Inconsistency(format!(
            "quadratic part {q} is not positive along the ray"
        )));
    }
    let f = |s: f64| 0.5 * s * s * q - w(s);
    let df = |s: f64| s * q - dw(s);
    let beyond = |s: f64| f(s) < 0.0 && df(s) < 0.0;

    let mut hi = 1.0;
    while !beyond(hi) {
        hi *= 2.0;
        if hi > SIGMA_CAP {
            return Err(FracError::Config(
                "energy along the ray stays positive up to 2^60".into(),
            ));
        }
    }
    while hi > 1.0 / SIGMA_CAP && beyond(0.5 * hi) {
        hi *= 0.5;
    }

    const CELLS: usize = 256;
    let step = hi / CELLS as f64;
    let (mut best_j, mut best_f) = (0usize, 0.0f64);
    for j in 1..=CELLS {
        let v = f(step * j as f64);
        if v > best_f {
            best_j = j;
            best_f = v;
        }
    }
    if best_j == 0 {
        return Err(FracError::Inconsistency(
            "no positive energy found along the ray".into(),
        ));
    }
    let mut lo = step * (best_j - 1) as f64;
    let mut up = step * (best_j + 1) as f64;
    let s_star = if df(lo.max(f64::MIN_POSITIVE)) > 0.0 && df(up) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + up);
            if mid <= lo || mid >= up {
                break;
            }
            if df(mid) > 0.0 {
                lo = mid;
            } else {
                up = mid;
            }
        }
        0.5 * (lo + up)
    } else {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, up);
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) >= f(d) {
                b = d;
            } else {
                a = c;
            }
            if b - a <= 1e-16 * b {
                break;
            }
        }
        0.5 * (a + b)
    };
    let v = f(s_star);
    Ok(if v >= best_f {
        (s_star, v)
    } else {
        (step * best_j as f64, best_f)
    })
}

/// Ray maximum of an energy through `v`: returns `(s*, I(s* v))` computed
/// from the split `½ s² Q(v) − ∫W(s v)`.
pub fn ray_peak<P: VariationalProblem + ?Sized>(problem: &P, v: &GridFunction) -> Result<(f64, f64)> {
    let q = problem.quadratic(v)?;
    ray_maximum(
        q,
        |s| problem.potential(&v.scaled(s)),
        |s| problem.potential_action(&v.scaled(s), v).unwrap_or(f64::NAN),
    )
}

/// Upper bound `c̃ = max_σ ½σ² Q_α(ψ) − ∫W(σψ)` on the line. The quadratic
/// part has no potential term, so the bound does not depend on `λ`.
pub fn ctilde_bound(setup: &MountainPassSetup, spec: &ProblemSpec) -> Result<f64> {
    let psi = &setup.psi;
    spec.check_function(psi)?;
    let q = quadratic_form_alpha(psi, spec.alpha)?;
    Ok(ray_bound(q, psi, &spec.nonlinearity)?.1)
}

/// The same bound on the interval, with the stiffness form.
pub fn bvp_ctilde_bound(setup: &MountainPassSetup, spec: &BvpSpec) -> Result<f64> {
    let f = BvpFunctional::new(spec)?;
    let q = f.bilinear(&setup.psi, &setup.psi)?;
    Ok(ray_bound(q, &setup.psi, &spec.nonlinearity)?.1)
}

fn ray_bound(q: f64, psi: &GridFunction, nl: &NonlinearitySpec) -> Result<(f64, f64)> {
    let w = |s: f64| crate::fracops::integrate(&psi.scaled(s), |t, x| nl.w(t, x));
    let dw = |s: f64| {
        let u = psi.scaled(s);
        // ⟨∇W(t, sψ), ψ⟩ = ⟨∇W(t, u), u⟩ / s
        crate::fracops::integrate(&u, |t, x| {
            eval_grad_w(t, x, nl).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / s
        })
    };
    ray_maximum(q, w, dw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_scan_hand_example() {
        // ε = Θ/2, C_ε/(pΘ^{p/2}m^{(p-2)/2}) = 1, p = 4: bracket ¼ − ρ².
        let (rho, eta) = rho_eta_scan(0.25, 1.0, 4.0).unwrap();
        let expected = 10f64.powf(-0.31);
        assert_eq!(rho, expected);
        assert!(10f64.powf(-0.30) >= 0.5);
        assert!((eta - rho * rho * (0.25 - rho * rho)).abs() < 1e-16);
    }

    #[test]
    fn rho_scan_via_constants() {
        // Θ = 2, m = 1, ε = 1, p = 4, C_ε = 16 → b = 16/(4·4) = 1, a = ¼.
        let (rho, _) = rho_eta_from_constants(2.0, 1.0, 1.0, 16.0, 4.0).unwrap();
        assert_eq!(rho, 10f64.powf(-0.31));
        assert!(rho_eta_from_constants(2.0, 1.0, 2.0, 16.0, 4.0).is_err());
    }

    #[test]
    fn ray_maximum_quartic() {
        // f(s) = ½ s²·2 − s⁴·0.5 → max at s = 1, value ½.
        let (s, v) = ray_maximum(2.0, |s| 0.5 * s.powi(4), |s| 2.0 * s.powi(3)).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ctilde_matches_closed_form() {
        let spec = ProblemSpec::default();
        let setup = construct_e(&spec, 0.2).unwrap();
        let a = 0.5 * quadratic_form_alpha(&setup.psi, spec.alpha).unwrap();
        let b = setup.psi.lp_power(4.0);
        let ct = ctilde_bound(&setup, &spec).unwrap();
        assert!((ct / (a * a / (4.0 * b)) - 1.0).abs() < 1e-4);
        assert!(ct > 0.0);
    }

    #[test]
    fn sigma0_is_first_doubling_past_root() {
        let spec = ProblemSpec::default();
        let setup = construct_e(&spec, 0.2).unwrap();
        let a = 0.5 * quadratic_form_alpha(&setup.psi, spec.alpha).unwrap();
        let b = setup.psi.lp_power(4.0);
        let root = (a / b).sqrt();
        // Energy turns negative past √(A/B); σ₀ is the first power of two
        // beyond it, unless the norm condition demands more.
        assert!(setup.sigma0 > root);
        assert!(setup.sigma0 / 2.0 <= root || setup.norm_e / 2.0 <= setup.rho);
        assert!(setup.energy_e < 0.0 && setup.norm_e > setup.rho);
    }
}
