use serde::{Deserialize, Serialize};

use super::config::hash_canonical;
use crate::error::{FracError, Result};
use crate::fracops::{GridFunction, IntervalGrid, RealLineGrid};
use crate::functional::{h_identity_with, BvpSpec, LineFunctional, ProblemSpec};
use crate::mpa::{
    bvp_solve, construct_e_bvp, construct_e_with, ctilde_bound, mpa_solve_from, GeometryOptions, MpaConfig,
    SolveResult,
};
use crate::spaces::{norm_h_alpha, EmbeddingConstants};

/// `∫_{|t|>ϱ} |u|² / ∫ |u|²` on a line grid.
pub fn tail_mass_ratio(u: &GridFunction, varrho: f64) -> Result<f64> {
    let grid = u.grid().as_line()?;
    let (mut tail, mut total) = (0.0, 0.0);
    for j in 0..grid.num_points() {
        let m: f64 = u.at(j).iter().map(|x| x * x).sum();
        total += m;
        if grid.node(j).abs() > varrho {
            tail += m;
        }
    }
    if total == 0.0 {
        return Err(FracError::Undefined(
            "tail mass of the zero function".into(),
        ));
    }
    Ok(tail / total)
}

/// Zero extension of an interval function onto the line grid, each line
/// node inside the interval taking the value at the nearest interval node.
/// Returns the extension and the largest node misalignment.
pub fn embed_interval(w: &GridFunction, line: &RealLineGrid) -> Result<(GridFunction, f64)> {
    let ig: IntervalGrid = *w.grid().as_interval()?;
    let d = w.dim();
    let hb = ig.spacing();
    let last = ig.num_points() - 1;
    let mut vals = vec![0.0; line.num_points() * d];
    let mut align = 0.0f64;
    for j in 0..line.num_points() {
        let t = line.node(j);
        if t < ig.a() || t > ig.b() {
            continue;
        }
        let i = (((t - ig.a()) / hb).round() as usize).min(last);
        align = align.max((t - ig.node(i)).abs());
        vals[j * d..(j + 1) * d].copy_from_slice(w.at(i));
    }
    Ok((GridFunction::from_values(*line, d, vals)?, align))
}

/// Settings of a `λ` sweep beyond the base problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub mpa: MpaConfig,
    pub tau: f64,
    pub geometry: GeometryOptions,
    pub bvp_points: usize,
    pub cold: bool,
    pub assert_monotone: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            mpa: MpaConfig::default(),
            tau: 0.2,
            geometry: GeometryOptions::default(),
            bvp_points: 257,
            cold: false,
            assert_monotone: true,
        }
    }
}

/// The identity `‖u‖²_{X^{α,λ}} = ∫ (∇W(t,u), u)` satisfied by critical
/// points, both sides assembled independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalIdentity {
    pub x_norm_sq: f64,
    pub gradient_pairing: f64,
    pub gap: f64,
    /// `gap ≤ 10⁻⁶(1 + ‖u‖²)`.
    pub passed: bool,
}

pub fn critical_identity(f: &LineFunctional, u: &GridFunction) -> Result<CriticalIdentity> {
    let x = crate::spaces::norm_x_lambda(u, f.spec())?.powi(2);
    let pair = f.grad_w(u).l2_inner(u)?;
    let gap = (x - pair).abs();
    Ok(CriticalIdentity {
        x_norm_sq: x,
        gradient_pairing: pair,
        gap,
        passed: gap <= 1e-6 * (1.0 + x),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub level: f64,
    pub residual: f64,
    pub cerami_residual: f64,
    pub iterations: usize,
    pub tail_mass_ratio: f64,
    pub dist_to_bvp_h_alpha: f64,
    pub converged: bool,
    pub critical_identity: CriticalIdentity,
    pub h_identity_gap: f64,
    /// `η − tol ≤ level ≤ c̃ + tol`.
    pub level_chain: bool,
    pub warm_started: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub bvp_reference: SolveResult,
    /// Digest of the interval problem and solver settings behind
    /// `bvp_reference`.
    pub bvp_hash: String,
    pub ctilde: f64,
    pub eta: f64,
    pub rho: f64,
    pub sigma0: f64,
    pub lambda_floor: f64,
    /// Largest distance between a line node and the interval node it copies.
    pub alignment_error: f64,
    /// Smallest swept `λ` whose record converged with both identities
    /// holding. An empirical marker only.
    pub observed_admissible_lambda: Option<f64>,
    pub config_hash: String,
}

/// Solutions for each `λ`, plus the interval reference. The final `u_λ`
/// are returned alongside the report for persistence.
pub struct SweepOutput {
    pub report: SweepReport,
    pub solutions: Vec<SolveResult>,
}

#[derive(Serialize)]
struct SweepKey<'a> {
    base: &'a ProblemSpec,
    lambdas: &'a [f64],
    options: &'a SweepOptions,
}

fn check_decrease(records: &[&SweepRecord], name: &str, get: impl Fn(&SweepRecord) -> f64) -> Result<()> {
    for w in records.windows(2) {
        if !(get(w[1]) < get(w[0])) {
            return Err(FracError::Monotonicity {
                quantity: name.into(),
                first: serde_json::to_string(w[0])?,
                second: serde_json::to_string(w[1])?,
            });
        }
    }
    Ok(())
}

/// Solve the interval problem once, then the line problem for each `λ`
/// (continuing from the previous solution unless `cold`), and record the
/// concentration diagnostics.
pub fn lambda_sweep(base: &ProblemSpec, lambdas: &[f64], opts: &SweepOptions) -> Result<SweepOutput> {
    base.check()?;
    if lambdas.is_empty() {
        return Err(FracError::Config("the sweep needs at least one lambda".into()));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(FracError::Config("lambdas must be strictly increasing".into()));
    }
    let consts = EmbeddingConstants::for_spec(base)?;
    if lambdas[0] < consts.lambda_floor {
        return Err(FracError::Hypothesis {
            name: "lambda_floor".into(),
            witness: format!("lambda = {} is below lambda_floor = {}", lambdas[0], consts.lambda_floor),
        });
    }
    let config_hash = hash_canonical(&SweepKey {
        base,
        lambdas,
        options: opts,
    })?;

    let bvp_spec = BvpSpec::on_core(
        base.alpha,
        base.varrho(),
        opts.bvp_points,
        base.nonlinearity.clone(),
        base.dim,
    )?;
    let bvp_hash = hash_canonical(&(&bvp_spec, &opts.mpa, opts.tau, &opts.geometry))?;
    let bvp_setup = construct_e_bvp(&bvp_spec, opts.tau, &opts.geometry)?;
    let bvp_reference = bvp_solve(&bvp_spec, &bvp_setup, &opts.mpa)?;
    let (tilde_u, alignment_error) = embed_interval(&bvp_reference.u, &base.grid)?;

    // (ρ, η, σ₀) and c̃ do not depend on λ; build them once.
    let setup = construct_e_with(base, opts.tau, &opts.geometry)?;
    let ctilde = ctilde_bound(&setup, base)?;

    let solve_one = |lambda: f64, start: Option<&GridFunction>| -> Result<(SweepRecord, SolveResult)> {
        let spec = base.with_lambda(lambda);
        let r = mpa_solve_from(&spec, &setup, &opts.mpa, start)?;
        let f = LineFunctional::with_metric(&spec, opts.mpa.metric, opts.mpa.cg)?;
        let crit = critical_identity(&f, &r.u)?;
        let hid = h_identity_with(&f, &r.u)?;
        let tol = opts.mpa.tol;
        let rec = SweepRecord {
            lambda,
            level: r.level,
            residual: r.residual,
            cerami_residual: r.cerami_residual,
            iterations: r.iterations,
            tail_mass_ratio: tail_mass_ratio(&r.u, base.varrho())?,
            dist_to_bvp_h_alpha: norm_h_alpha(&r.u.sub(&tilde_u)?, base.alpha)?,
            converged: r.converged,
            critical_identity: crit,
            h_identity_gap: hid.gap,
            level_chain: setup.eta - tol <= r.level && r.level <= ctilde + tol,
            warm_started: start.is_some(),
        };
        Ok((rec, r))
    };

    let mut pairs: Vec<(SweepRecord, SolveResult)> = Vec::with_capacity(lambdas.len());
    if opts.cold {
        for p in opts.mpa.exec.map(lambdas, |&l| solve_one(l, None)) {
            pairs.push(p?);
        }
    } else {
        for &l in lambdas {
            let start = pairs.last().map(|(_, r)| r.u.clone());
            pairs.push(solve_one(l, start.as_ref())?);
        }
    }

    let (records, solutions): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    if records.iter().all(|r| !r.converged) {
        return Err(FracError::SweepFailed);
    }
    for r in records.iter().filter(|r| r.converged) {
        if r.level > ctilde + opts.mpa.tol {
            return Err(FracError::Inconsistency(format!(
                "level {} at lambda = {} exceeds the bound {ctilde}",
                r.level, r.lambda
            )));
        }
    }
    if opts.assert_monotone {
        let conv: Vec<&SweepRecord> = records.iter().filter(|r| r.converged).collect();
        check_decrease(&conv, "tail_mass_ratio", |r| r.tail_mass_ratio)?;
        check_decrease(&conv, "dist_to_bvp_h_alpha", |r| r.dist_to_bvp_h_alpha)?;
    }
    let observed_admissible_lambda = records
        .iter()
        .find(|r| r.converged && r.critical_identity.passed && r.h_identity_gap <= 1e-6 * (1.0 + r.level.abs()))
        .map(|r| r.lambda);

    Ok(SweepOutput {
        report: SweepReport {
            records,
            bvp_reference,
            bvp_hash,
            ctilde,
            eta: setup.eta,
            rho: setup.rho,
            sigma0: setup.sigma0,
            lambda_floor: consts.lambda_floor,
            alignment_error,
            observed_admissible_lambda,
            config_hash,
        },
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_mass_examples() {
        let g = RealLineGrid::new(4.0, 512).unwrap();
        let inside = GridFunction::from_fn(g, |t| if t.abs() < 0.2 { 1.0 } else { 0.0 });
        let outside = GridFunction::from_fn(g, |t| if t.abs() > 1.0 && t.abs() < 2.0 { 1.0 } else { 0.0 });
        assert_eq!(tail_mass_ratio(&inside, 0.25).unwrap(), 0.0);
        assert_eq!(tail_mass_ratio(&outside, 0.25).unwrap(), 1.0);
        let bump = |c: f64| move |t: f64| (-((t - c) / 0.05).powi(2)).exp();
        let both = GridFunction::from_fn(g, |t| bump(0.0)(t) + bump(2.0)(t));
        assert!((tail_mass_ratio(&both, 0.25).unwrap() - 0.5).abs() < 1e-6);
        assert!(tail_mass_ratio(&GridFunction::zeros(g, 1), 0.25).is_err());
    }

    #[test]
    fn embedding_copies_nearest_nodes() {
        let line = RealLineGrid::new(1.0, 64).unwrap();
        let ig = IntervalGrid::new(-0.25, 0.25, 9).unwrap();
        let w = GridFunction::from_fn(ig, |t| 0.0625 - t * t).into_dirichlet().unwrap();
        let (e, align) = embed_interval(&w, &line).unwrap();
        assert!(align <= 0.5 * ig.spacing() + 1e-15);
        for j in 0..64 {
            let t = line.node(j);
            if t.abs() > 0.25 {
                assert_eq!(e.at(j)[0], 0.0);
            } else {
                assert!((e.at(j)[0] - (0.0625 - t * t)).abs() <= 0.5 * ig.spacing());
            }
        }
    }

    #[test]
    fn rejects_unsorted_lambdas() {
        let spec = ProblemSpec::default();
        assert!(lambda_sweep(&spec, &[10.0, 1.0], &SweepOptions::default()).is_err());
        assert!(lambda_sweep(&spec, &[], &SweepOptions::default()).is_err());
    }
}
