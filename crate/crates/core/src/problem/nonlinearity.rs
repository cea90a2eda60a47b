use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{HypothesisCheck, ValidationReport};
use crate::error::{FracError, Result};

/// Radial profile `w(r)` with `W(t, u) = g(t) w(|u|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NonlinearityFamily {
    /// `w(r) = r^p`.
    PurePower { p: f64 },
    /// `w(r) = r^p + (p-2) r^{p-ε} sin²(r^ε / ε)`.
    Oscillatory { p: f64, epsilon: f64 },
}

/// Positive, bounded weight `g(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum WeightProfile {
    Constant { g: f64 },
    /// `g (1 + a cos(2πt / period))` with `|a| < 1`.
    Cosine { g: f64, amplitude: f64, period: f64 },
}

impl Default for WeightProfile {
    fn default() -> Self {
        WeightProfile::Constant { g: 1.0 }
    }
}

impl WeightProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            WeightProfile::Constant { g } => g,
            WeightProfile::Cosine {
                g,
                amplitude,
                period,
            } => g * (1.0 + amplitude * (2.0 * PI * t / period).cos()),
        }
    }

    pub fn sup(&self) -> f64 {
        match *self {
            WeightProfile::Constant { g } => g,
            WeightProfile::Cosine { g, amplitude, .. } => g * (1.0 + amplitude.abs()),
        }
    }

    pub fn inf(&self) -> f64 {
        match *self {
            WeightProfile::Constant { g } => g,
            WeightProfile::Cosine { g, amplitude, .. } => g * (1.0 - amplitude.abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub family: NonlinearityFamily,
    #[serde(default)]
    pub weight: WeightProfile,
    /// Configured constant `C₀` of the growth condition on `H`; when absent
    /// the validator only reports the observed tight value.
    #[serde(default)]
    pub c0: Option<f64>,
    /// Radius beyond which the growth condition on `H` is checked.
    #[serde(default = "default_radius")]
    pub r: f64,
}

fn default_radius() -> f64 {
    1.0
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self::pure_power(4.0, 1.0)
    }
}

impl NonlinearitySpec {
    pub fn pure_power(p: f64, g: f64) -> Self {
        Self {
            family: NonlinearityFamily::PurePower { p },
            weight: WeightProfile::Constant { g },
            c0: None,
            r: 1.0,
        }
    }

    pub fn oscillatory(p: f64, epsilon: f64, g: f64) -> Self {
        Self {
            family: NonlinearityFamily::Oscillatory { p, epsilon },
            weight: WeightProfile::Constant { g },
            c0: None,
            r: 1.0,
        }
    }

    /// Structural parameter checks (not the hypotheses themselves).
    pub fn check(&self) -> Result<()> {
        if !(self.weight.inf() > 0.0 && self.weight.sup().is_finite()) {
            return Err(FracError::Config(
                "nonlinearity weight must be bounded with positive infimum".into(),
            ));
        }
        if let NonlinearityFamily::Oscillatory { p, epsilon } = self.family {
            if !(epsilon > 0.0 && epsilon < p - 2.0) {
                return Err(FracError::Config(format!(
                    "oscillatory family needs 0 < epsilon < p - 2, got epsilon = {epsilon}, p = {p}"
                )));
            }
        }
        if !(self.r > 0.0) {
            return Err(FracError::Config("growth radius R must be positive".into()));
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        match self.family {
            NonlinearityFamily::PurePower { p } | NonlinearityFamily::Oscillatory { p, .. } => p,
        }
    }

    /// Exponent `σ` of the growth condition `(|∇W|/|u|)^σ ≤ C₀ H`;
    /// infinite when `p ≤ 2`.
    pub fn sigma(&self) -> f64 {
        let p = self.p();
        if p <= 2.0 {
            return f64::INFINITY;
        }
        match self.family {
            NonlinearityFamily::PurePower { p } => p / (p - 2.0),
            NonlinearityFamily::Oscillatory { p, epsilon } => (p - epsilon) / (p - 2.0),
        }
    }

    /// `2σ/(σ - 1)`: the power in the growth bounds and embedding constants.
    pub fn growth_exponent(&self) -> f64 {
        let s = self.sigma();
        if s.is_infinite() {
            return 2.0;
        }
        2.0 * s / (s - 1.0)
    }

    /// `(w(r), w'(r))`.
    pub fn radial(&self, r: f64) -> (f64, f64) {
        if r == 0.0 {
            return (0.0, 0.0);
        }
        match self.family {
            NonlinearityFamily::PurePower { p } => {
                let rp1 = r.powf(p - 1.0);
                (rp1 * r, p * rp1)
            }
            NonlinearityFamily::Oscillatory { p, epsilon } => {
                let s = r.powf(epsilon) / epsilon;
                let sin = s.sin();
                let rp1 = r.powf(p - 1.0);
                let rpe1 = r.powf(p - epsilon - 1.0);
                let w = rp1 * r + (p - 2.0) * rpe1 * r * sin * sin;
                let dw = p * rp1
                    + (p - 2.0) * (p - epsilon) * rpe1 * sin * sin
                    + (p - 2.0) * rp1 * (2.0 * s).sin();
                (w, dw)
            }
        }
    }

    pub fn w(&self, t: f64, u: &[f64]) -> f64 {
        self.weight.eval(t) * self.radial(norm(u)).0
    }

    /// `∇W(t, u)` written into `out`.
    pub fn grad_into(&self, t: f64, u: &[f64], out: &mut [f64]) {
        let r = norm(u);
        if r == 0.0 {
            out.iter_mut().for_each(|x| *x = 0.0);
            return;
        }
        let s = self.weight.eval(t) * self.radial(r).1 / r;
        for (o, x) in out.iter_mut().zip(u) {
            *o = s * x;
        }
    }

    /// `H = ½⟨∇W, u⟩ - W`, computed from the gradient actually returned.
    pub fn h(&self, t: f64, u: &[f64]) -> f64 {
        let mut g = vec![0.0; u.len()];
        self.grad_into(t, u, &mut g);
        0.5 * dot(&g, u) - self.w(t, u)
    }

    /// Closed form of `H` in radial variables, for cross-checks.
    pub fn h_closed_form(&self, t: f64, r: f64) -> f64 {
        let g = self.weight.eval(t);
        match self.family {
            NonlinearityFamily::PurePower { p } => g * (0.5 * p - 1.0) * r.powf(p),
            NonlinearityFamily::Oscillatory { p, epsilon } => {
                let s = r.powf(epsilon) / epsilon;
                g * 0.5
                    * (p - 2.0)
                    * (r.powf(p) * (1.0 + (2.0 * s).sin())
                        + (p - epsilon - 2.0) * r.powf(p - epsilon) * s.sin().powi(2))
            }
        }
    }
}

fn norm(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn eval_w(t: f64, u: &[f64], spec: &NonlinearitySpec) -> f64 {
    spec.w(t, u)
}

pub fn eval_grad_w(t: f64, u: &[f64], spec: &NonlinearitySpec) -> Vec<f64> {
    let mut g = vec![0.0; u.len()];
    spec.grad_into(t, u, &mut g);
    g
}

pub fn eval_h(t: f64, u: &[f64], spec: &NonlinearitySpec) -> f64 {
    spec.h(t, u)
}

fn log_grid(lo_exp: f64, hi_exp: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi_exp - lo_exp) * per_decade as f64).round() as usize;
    (0..=n)
        .map(|i| 10f64.powf(lo_exp + i as f64 / per_decade as f64))
        .collect()
}

/// Smallest `C_ε` with `|∇W(t,u)| ≤ ε|u| + C_ε |u|^{q-1}` observed on
/// `|u| ∈ [10⁻⁸, 10⁴]` (200 points per decade, worst-case weight), where
/// `q` is the growth exponent.
pub fn growth_constant(spec: &NonlinearitySpec, eps: f64) -> f64 {
    let q = spec.growth_exponent();
    let gmax = spec.weight.sup();
    log_grid(-8.0, 4.0, 200)
        .into_iter()
        .map(|r| ((gmax * spec.radial(r).1.abs() - eps * r) / r.powf(q - 1.0)).max(0.0))
        .fold(0.0, f64::max)
}

/// Sample the four structural hypotheses on fixed windows:
///
/// * `small_u_gradient` — `sup |∇W|/|u|` over successive decades of
///   `|u| ∈ [10⁻⁶, 10⁻¹]` decreases strictly toward zero, and `∇W(0) = 0`.
/// * `nonnegativity` — `W ≥ 0` and `H ≥ -10⁻¹²(1 + W)` at `budget` random
///   `(t, u)` with `|u|` log-uniform in `[10⁻³, 10²]`.
/// * `superquadratic` — `min W/|u|²` over successive decades of
///   `|u| ∈ [R, 10³]` increases strictly.
/// * `gradient_growth` — `σ > 1`, `H > 0` and `(|∇W|/|u|)^σ ≤ C₀ H` for
///   `|u| ∈ [R, 10³]`; reports the tightest `C₀` and compares it with the
///   configured one when present.
pub fn validate_nonlinearity(
    spec: &NonlinearitySpec,
    budget: usize,
    seed: u64,
    dim: usize,
) -> Result<ValidationReport> {
    if dim == 0 {
        return Err(FracError::Config("vector dimension must be >= 1".into()));
    }
    if budget == 0 {
        return Ok(ValidationReport::default());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<f64> = (0..8).map(|_| rng.random_range(-20.0..20.0)).collect();
    let mut checks = Vec::new();
    let per_decade = 20;

    // Decade sups of |∇W|/|u|, from [1e-2, 1e-1] down to [1e-6, 1e-5].
    let mut small_ok = spec.radial(0.0) == (0.0, 0.0);
    let mut small_obs = 0.0f64;
    let mut small_witness = String::from("all decades decrease");
    for &t in &ts {
        let g = spec.weight.eval(t);
        let sups: Vec<f64> = (0..5)
            .map(|k| {
                let hi = -1.0 - k as f64;
                log_grid(hi - 1.0, hi, per_decade)
                    .into_iter()
                    .map(|r| g * spec.radial(r).1.abs() / r)
                    .fold(0.0, f64::max)
            })
            .collect();
        for (k, w) in sups.windows(2).enumerate() {
            if !(w[1] < w[0]) && small_ok {
                small_ok = false;
                small_witness = format!(
                    "t = {t}: sup |grad W|/|u| on [1e{}, 1e{}] is {} >= {} on the decade above",
                    -3 - k as i64,
                    -2 - k as i64,
                    w[1],
                    w[0]
                );
            }
        }
        small_obs = small_obs.max(sups[4]);
    }
    checks.push(HypothesisCheck {
        name: "small_u_gradient".into(),
        passed: small_ok,
        observed: small_obs,
        witness: small_witness,
        note: "consistent with |grad W| = o(|u|) as |u| -> 0 on the sampled window".into(),
    });

    // Random (t, u) for sign conditions.
    let mut nonneg_ok = true;
    let mut worst_h = f64::INFINITY;
    let mut nonneg_witness = String::new();
    for _ in 0..budget {
        let t = rng.random_range(-20.0..20.0);
        let r = 10f64.powf(rng.random_range(-3.0..2.0));
        let mut u: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&u).max(f64::MIN_POSITIVE);
        u.iter_mut().for_each(|x| *x *= r / n);
        let w = spec.w(t, &u);
        let h = spec.h(t, &u);
        let scaled = h / (1.0 + w);
        if scaled < worst_h {
            worst_h = scaled;
            nonneg_witness = format!("t = {t}, u = {u:?}, W = {w}, H = {h}");
        }
        if w < 0.0 || h < -1e-12 * (1.0 + w) {
            nonneg_ok = false;
        }
    }
    checks.push(HypothesisCheck {
        name: "nonnegativity".into(),
        passed: nonneg_ok,
        observed: worst_h,
        witness: nonneg_witness,
        note: "W >= 0 and H >= 0 (relative round-off 1e-12) at random points".into(),
    });

    // Decade minima of W/|u|^2 beyond R.
    let lo = spec.r.log10();
    let decades = (3.0 - lo).floor().max(1.0) as usize;
    let mut sq_ok = true;
    let mut sq_obs = f64::INFINITY;
    let mut sq_witness = String::from("decade minima increase");
    for &t in &ts {
        let g = spec.weight.eval(t);
        let mins: Vec<f64> = (0..decades)
            .map(|k| {
                let a = lo + k as f64;
                log_grid(a, a + 1.0, per_decade)
                    .into_iter()
                    .map(|r| g * spec.radial(r).0 / (r * r))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        for (k, w) in mins.windows(2).enumerate() {
            if !(w[1] > w[0]) && sq_ok {
                sq_ok = false;
                sq_witness = format!(
                    "t = {t}: min W/|u|^2 on [1e{:.2}, 1e{:.2}] is {} <= {} on the decade below",
                    lo + k as f64 + 1.0,
                    lo + k as f64 + 2.0,
                    w[1],
                    w[0]
                );
            }
        }
        sq_obs = sq_obs.min(*mins.last().unwrap());
    }
    checks.push(HypothesisCheck {
        name: "superquadratic".into(),
        passed: sq_ok,
        observed: sq_obs,
        witness: sq_witness,
        note: "consistent with W/|u|^2 -> infinity; observed is the last-decade minimum".into(),
    });

    // Growth condition on H.
    let sigma = spec.sigma();
    let mut c0_obs = 0.0f64;
    let mut growth_ok = sigma.is_finite() && sigma > 1.0;
    let mut growth_witness = if growth_ok {
        String::new()
    } else {
        format!("sigma = {sigma} is not a finite exponent > 1")
    };
    if growth_ok {
        for &t in &ts {
            let g = spec.weight.eval(t);
            for r in log_grid(lo, 3.0, 200) {
                let (_, dw) = spec.radial(r);
                let h = spec.h_closed_form(t, r);
                if !(h > 0.0) {
                    growth_ok = false;
                    growth_witness = format!("H = {h} at t = {t}, |u| = {r}");
                    break;
                }
                let ratio = (g * dw.abs() / r).powf(sigma) / h;
                if ratio > c0_obs {
                    c0_obs = ratio;
                    growth_witness = format!("tightest at t = {t}, |u| = {r}");
                }
            }
        }
        if let Some(c0) = spec.c0 {
            if c0 < c0_obs {
                growth_ok = false;
                growth_witness = format!(
                    "configured C0 = {c0} below observed {c0_obs} ({growth_witness})"
                );
            }
        }
    }
    checks.push(HypothesisCheck {
        name: "gradient_growth".into(),
        passed: growth_ok,
        observed: c0_obs,
        witness: growth_witness,
        note: format!("sigma = {sigma}; observed is the tightest C0 on [R, 1e3]"),
    });

    for eps in [0.1, 0.01] {
        let c = growth_constant(spec, eps);
        checks.push(HypothesisCheck {
            name: format!("growth_bound_eps_{eps}"),
            passed: c.is_finite(),
            observed: c,
            witness: format!("|grad W| <= {eps}|u| + {c}|u|^(q-1), q = {}", spec.growth_exponent()),
            note: "C_eps observed on |u| in [1e-8, 1e4]".into(),
        });
    }
    Ok(ValidationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input() {
        for spec in [NonlinearitySpec::pure_power(4.0, 1.0), NonlinearitySpec::oscillatory(3.0, 0.5, 1.0)] {
            assert_eq!(eval_w(0.3, &[0.0, 0.0], &spec), 0.0);
            assert_eq!(eval_grad_w(0.3, &[0.0, 0.0], &spec), vec![0.0, 0.0]);
            assert_eq!(eval_h(0.3, &[0.0, 0.0], &spec), 0.0);
        }
    }

    #[test]
    fn quartic_h_equals_w() {
        let spec = NonlinearitySpec::pure_power(4.0, 1.0);
        for r in [0.1, 1.3, 7.0] {
            let u = [r];
            assert!((eval_h(0.0, &u, &spec) - r.powi(4)).abs() < 1e-12 * r.powi(4).max(1.0));
        }
        assert_eq!(spec.sigma(), 2.0);
        assert_eq!(spec.growth_exponent(), 4.0);
    }

    #[test]
    fn oscillatory_gradient_finite_difference() {
        let spec = NonlinearitySpec::oscillatory(3.0, 0.5, 1.0);
        let h = 1e-6;
        let fd = (eval_w(0.0, &[2.0 + h], &spec) - eval_w(0.0, &[2.0 - h], &spec)) / (2.0 * h);
        let g = eval_grad_w(0.0, &[2.0], &spec)[0];
        assert!(((fd - g) / g).abs() < 1e-6, "fd {fd} vs {g}");
    }

    #[test]
    fn closed_form_h_matches() {
        let spec = NonlinearitySpec::oscillatory(4.0, 0.7, 1.5);
        for r in [0.01, 0.5, 3.0, 40.0] {
            let a = spec.h(0.0, &[0.0, r]);
            let b = spec.h_closed_form(0.0, r);
            assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()));
        }
    }
}
