use serde::{Deserialize, Serialize};

use super::constants::{estimate_c_infinity, EmbeddingConstants};
use super::samples::{draw_interval_sample, draw_line_sample, SampleFamily};
use super::{norm_h_alpha, norm_x_lambda};
use crate::error::{FracError, Result};
use crate::exec::Exec;
use crate::fracops::special::gamma;
use crate::fracops::{grunwald_left_rl, GridFunction, IntervalGrid};
use crate::functional::ProblemSpec;

/// Slack allowed on every sampled ratio.
pub const RATIO_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Interval `[a, b]` and node count for the interval inequalities.
    pub interval: (f64, f64),
    pub interval_points: usize,
    /// Exponents `p > 2` for the `L^p` bounds.
    pub exponents: Vec<f64>,
    /// Number of extra samples for the Monte-Carlo sup-constant estimate
    /// (0 skips it).
    pub estimate_samples: usize,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20240611,
            interval: (0.0, 1.0),
            interval_points: 257,
            exponents: vec![3.0, 4.0, 6.0],
            estimate_samples: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    /// Largest `lhs / rhs` over all samples (0 when every side vanished).
    pub worst_ratio: f64,
    pub argmax_sample_id: Option<usize>,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub lambda: f64,
    pub seed: u64,
    pub samples: usize,
    pub constants: EmbeddingConstants,
    pub inequalities: Vec<InequalityRecord>,
    /// Inequalities not evaluated, with the reason.
    pub skipped: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.inequalities.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InequalityRecord> {
        self.inequalities.iter().find(|r| r.name == name)
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Ratios `lhs/rhs` of every inequality for one line function `u` and one
/// Dirichlet interval function `w`. The `X^{α,λ}` bounds are only included
/// when `spec.lambda ≥ lambda_floor`.
pub fn inequality_ratios(
    u: &GridFunction,
    w: &GridFunction,
    spec: &ProblemSpec,
    constants: &EmbeddingConstants,
    exponents: &[f64],
) -> Result<Vec<(String, f64)>> {
    let alpha = spec.alpha;
    let mut out = Vec::new();

    let ig = w.grid().as_interval()?;
    let len = ig.length();
    let dw = grunwald_left_rl(w, alpha)?;
    for p in [2.0, 4.0] {
        let rhs = len.powf(alpha) / gamma(alpha + 1.0) * dw.lp_norm(p);
        out.push((format!("interval_lp_bound_p{p}"), ratio(w.lp_norm(p), rhs)));
    }
    // Sup bound with p = q = 2.
    let c_sup = len.powf(alpha - 0.5) / (gamma(alpha) * (2.0 * alpha - 1.0).sqrt());
    out.push((
        "interval_sup_bound_p2".into(),
        ratio(w.sup_norm(), c_sup * dw.l2_norm()),
    ));

    let sup = u.sup_norm();
    let l2sq = u.l2_norm_sq();
    let ha = norm_h_alpha(u, alpha)?;
    out.push((
        "sup_embedding".into(),
        ratio(sup, constants.c_infinity * ha),
    ));
    for &p in exponents {
        out.push((
            format!("lp_interpolation_p{p}"),
            ratio(u.lp_power(p), sup.powf(p - 2.0) * l2sq),
        ));
    }
    if spec.lambda >= constants.lambda_floor {
        let x = norm_x_lambda(u, spec)?;
        let x2 = x * x;
        out.push(("l2_by_x_lambda".into(), ratio(l2sq, x2 / constants.theta)));
        out.push((
            "h_alpha_by_x_lambda".into(),
            ratio(ha * ha, (1.0 + 1.0 / constants.theta) * x2),
        ));
        for &p in exponents {
            out.push((
                format!("lp_by_x_lambda_p{p}"),
                ratio(u.lp_power(p), constants.kappa_pow(p) * x.powf(p)),
            ));
        }
    }
    Ok(out)
}

/// Evaluate every inequality on `samples` random functions (the three
/// families in rotation). A violated inequality aborts with the offending
/// sample serialized for replay; otherwise the report lists worst ratios.
pub fn verify_embeddings(samples: usize, spec: &ProblemSpec, opts: &VerifyOptions) -> Result<EmbeddingReport> {
    let mut constants = EmbeddingConstants::for_spec(spec)?;
    for &p in &opts.exponents {
        constants.add_exponent(p);
    }
    if opts.estimate_samples > 0 {
        let est = estimate_c_infinity(
            spec.alpha,
            &spec.grid,
            spec.dim,
            opts.estimate_samples,
            opts.seed ^ 0x5eed,
            opts.exec,
        )?;
        constants = constants.with_estimate(est, opts.estimate_samples);
    }
    let mut skipped = Vec::new();
    if spec.lambda < constants.lambda_floor {
        skipped.push(format!(
            "X-norm bounds skipped: lambda = {} below lambda_floor = {}",
            spec.lambda, constants.lambda_floor
        ));
    }
    let ig = IntervalGrid::new(opts.interval.0, opts.interval.1, opts.interval_points)?;

    let per_sample = opts.exec.map_range(samples, |id| -> Result<Vec<(String, f64)>> {
        let family = SampleFamily::ALL[id % 3];
        let su = draw_line_sample(opts.seed, id as u64, family, &spec.grid, spec.dim);
        let sw = draw_interval_sample(opts.seed, id as u64, family, &ig, spec.dim);
        inequality_ratios(
            &su.render_line(&spec.grid, spec.dim),
            &sw.render_interval(&ig, spec.dim),
            spec,
            &constants,
            &opts.exponents,
        )
    });

    let mut records: Vec<InequalityRecord> = Vec::new();
    for (id, res) in per_sample.into_iter().enumerate() {
        for (name, r) in res? {
            let rec = match records.iter_mut().find(|x| x.name == name) {
                Some(rec) => rec,
                None => {
                    records.push(InequalityRecord {
                        name: name.clone(),
                        worst_ratio: 0.0,
                        argmax_sample_id: None,
                        samples: 0,
                        passed: true,
                    });
                    records.last_mut().unwrap()
                }
            };
            rec.samples += 1;
            if r > rec.worst_ratio || (rec.argmax_sample_id.is_none() && r >= rec.worst_ratio) {
                rec.worst_ratio = r;
                rec.argmax_sample_id = Some(id);
            }
            if !(r <= 1.0 + RATIO_SLACK) {
                let family = SampleFamily::ALL[id % 3];
                let replay = serde_json::json!({
                    "seed": opts.seed,
                    "sample_id": id,
                    "line_sample": draw_line_sample(opts.seed, id as u64, family, &spec.grid, spec.dim),
                    "interval_sample": draw_interval_sample(opts.seed, id as u64, family, &ig, spec.dim),
                    "interval": opts.interval,
                    "interval_points": opts.interval_points,
                });
                return Err(FracError::InequalityViolated {
                    name,
                    sample_id: id,
                    ratio: r,
                    sample: replay.to_string(),
                });
            }
        }
    }
    Ok(EmbeddingReport {
        lambda: spec.lambda,
        seed: opts.seed,
        samples,
        constants,
        inequalities: records,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_functions_give_zero_ratios() {
        let spec = ProblemSpec::default();
        let k = EmbeddingConstants::for_spec(&spec).unwrap();
        let u = GridFunction::zeros(spec.grid, 1);
        let ig = IntervalGrid::new(0.0, 1.0, 33).unwrap();
        let w = GridFunction::zeros(ig, 1);
        let r = inequality_ratios(&u, &w, &spec, &k, &[4.0]).unwrap();
        assert!(!r.is_empty());
        assert!(r.iter().all(|(_, x)| *x == 0.0));
    }

    #[test]
    fn small_campaign_passes() {
        let spec = ProblemSpec::default();
        let rep = verify_embeddings(30, &spec, &VerifyOptions::default()).unwrap();
        assert!(rep.passed());
        assert!(rep.get("l2_by_x_lambda").is_some());
    }
}
