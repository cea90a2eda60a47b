use serde::{Deserialize, Serialize};

use super::config::VerifySection;
use crate::error::{FracError, Result};
use crate::exec::Exec;
use crate::fracops::GridFunction;
use crate::functional::{h_identity_with, LineFunctional, ProblemSpec};
use crate::mpa::{construct_e_with, GeometryOptions};
use crate::problem::{validate_nonlinearity, validate_potential, ValidationReport};
use crate::spaces::{
    draw_line_sample, exact_c_infinity, verify_embeddings, EmbeddingReport, SampleFamily, VerifyOptions,
};

/// One named pass/fail line of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignCheck {
    pub category: String,
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub checks: Vec<CampaignCheck>,
    pub potential: Option<ValidationReport>,
    pub nonlinearity: Option<ValidationReport>,
    pub embeddings: Option<EmbeddingReport>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CampaignCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn absorb(&mut self, category: &str, rep: &ValidationReport) {
        for c in &rep.checks {
            self.checks.push(CampaignCheck {
                category: category.into(),
                name: c.name.clone(),
                passed: c.passed,
                observed: c.observed,
                witness: c.witness.clone(),
            });
        }
    }
}

/// Run every sampling verifier on `spec` and gather the outcomes. Failures
/// of individual checks are recorded, not raised; only configuration
/// errors abort.
pub fn run_verification_campaign(
    spec: &ProblemSpec,
    budgets: &VerifySection,
    seed: u64,
    tau: f64,
    geometry: &GeometryOptions,
    exec: Exec,
) -> Result<CampaignReport> {
    spec.check()?;
    let mut report = CampaignReport {
        seed,
        ..CampaignReport::default()
    };

    if budgets.hypothesis_budget > 0 {
        let c = exact_c_infinity(spec.alpha, &spec.grid)?;
        let pot = validate_potential(&spec.potential, &spec.grid, c)?;
        report.absorb("potential", &pot);
        report.potential = Some(pot);
        let nl = validate_nonlinearity(&spec.nonlinearity, budgets.hypothesis_budget, seed, spec.dim)?;
        report.absorb("nonlinearity", &nl);
        report.nonlinearity = Some(nl);
    }

    if budgets.samples > 0 {
        let opts = VerifyOptions {
            seed,
            estimate_samples: budgets.estimate_samples,
            exec,
            ..VerifyOptions::default()
        };
        match verify_embeddings(budgets.samples, spec, &opts) {
            Ok(rep) => {
                for r in &rep.inequalities {
                    report.checks.push(CampaignCheck {
                        category: "embedding".into(),
                        name: r.name.clone(),
                        passed: r.passed,
                        observed: r.worst_ratio,
                        witness: format!("sample {:?} of {}", r.argmax_sample_id, r.samples),
                    });
                }
                report.embeddings = Some(rep);
            }
            Err(FracError::InequalityViolated {
                name,
                ratio,
                sample,
                ..
            }) => report.checks.push(CampaignCheck {
                category: "embedding".into(),
                name,
                passed: false,
                observed: ratio,
                witness: sample,
            }),
            Err(FracError::Hypothesis { name, witness }) => report.checks.push(CampaignCheck {
                category: "embedding".into(),
                name,
                passed: false,
                observed: f64::NAN,
                witness,
            }),
            Err(e) => return Err(e),
        }
    }

    let f = LineFunctional::new(spec)?;
    if budgets.geometry_samples > 0 {
        match construct_e_with(spec, tau, geometry) {
            Ok(setup) => {
                let floor = geometry_floor(&f, setup.rho, budgets.geometry_samples, seed, exec)?;
                report.checks.push(CampaignCheck {
                    category: "geometry".into(),
                    name: "energy_floor_on_rho_sphere".into(),
                    passed: floor.0 >= setup.eta,
                    observed: floor.0,
                    witness: format!("min at sample {}; eta = {}, rho = {}", floor.1, setup.eta, setup.rho),
                });
                report.checks.push(CampaignCheck {
                    category: "geometry".into(),
                    name: "negative_endpoint".into(),
                    passed: setup.energy_e < 0.0,
                    observed: setup.energy_e,
                    witness: format!("sigma0 = {}", setup.sigma0),
                });
            }
            Err(e @ (FracError::Geometry { .. } | FracError::Hypothesis { .. })) => {
                report.checks.push(CampaignCheck {
                    category: "geometry".into(),
                    name: "mountain_pass_geometry".into(),
                    passed: false,
                    observed: f64::NAN,
                    witness: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }

    if budgets.identity_samples > 0 {
        let gaps = exec.map_range(budgets.identity_samples, |id| -> Result<(f64, f64)> {
            let u = random_line_function(spec, seed, id);
            let h = h_identity_with(&f, &u)?;
            Ok((h.gap, h.gap / (1.0 + h.lhs.abs())))
        });
        let mut worst = (0.0f64, 0usize);
        for (id, g) in gaps.into_iter().enumerate() {
            let (_, rel) = g?;
            if rel > worst.0 {
                worst = (rel, id);
            }
        }
        report.checks.push(CampaignCheck {
            category: "functional".into(),
            name: "h_identity".into(),
            passed: worst.0 <= 1e-10,
            observed: worst.0,
            witness: format!("sample {}", worst.1),
        });
    }
    Ok(report)
}

fn random_line_function(spec: &ProblemSpec, seed: u64, id: usize) -> GridFunction {
    let family = SampleFamily::ALL[id % 3];
    draw_line_sample(seed, id as u64, family, &spec.grid, spec.dim).render_line(&spec.grid, spec.dim)
}

/// Smallest energy over random functions rescaled to `‖u‖_{X^{α,λ}} = ρ`,
/// with the index where it occurs.
pub fn geometry_floor(f: &LineFunctional, rho: f64, samples: usize, seed: u64, exec: Exec) -> Result<(f64, usize)> {
    let spec = f.spec();
    let vals = exec.map_range(samples, |id| -> Result<f64> {
        let u = random_line_function(spec, seed ^ 0x6e0, id);
        let n = f.x_norm_sq(&u)?.sqrt();
        if n == 0.0 {
            return Ok(f64::INFINITY);
        }
        f.energy(&u.scaled(rho / n))
    });
    let mut best = (f64::INFINITY, 0);
    for (id, v) in vals.into_iter().enumerate() {
        let v = v?;
        if v < best.0 {
            best = (v, id);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::NonlinearitySpec;

    #[test]
    fn zero_budget_is_empty() {
        let r = run_verification_campaign(
            &ProblemSpec::default(),
            &VerifySection::zero(),
            1,
            0.2,
            &GeometryOptions::default(),
            Exec::Sequential,
        )
        .unwrap();
        assert!(r.checks.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn quadratic_nonlinearity_fails_superquadratic_check() {
        let spec = ProblemSpec {
            nonlinearity: NonlinearitySpec::pure_power(2.0, 1.0),
            ..ProblemSpec::default()
        };
        let budgets = VerifySection {
            hypothesis_budget: 50,
            ..VerifySection::zero()
        };
        let r = run_verification_campaign(&spec, &budgets, 1, 0.2, &GeometryOptions::default(), Exec::Sequential)
            .unwrap();
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"superquadratic"), "{failed:?}");
        assert!(r.failures().all(|c| !c.witness.is_empty()));
    }
}
