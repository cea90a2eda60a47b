use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::campaign::run_verification_campaign;
use super::config::{RunConfig, SCHEMA_VERSION};
use super::output::{
    unix_timestamp, write_json, write_solution_csv, write_solutions_csv, write_trace_csv,
};
use super::sweep::{critical_identity, lambda_sweep, tail_mass_ratio, SweepOptions};
use crate::error::Result;
use crate::functional::{bvp_h_identity, h_identity_with, metric_equivalence, BvpFunctional, LineFunctional};
use crate::mpa::{
    bvp_ctilde_bound, bvp_solve, construct_e_bvp, construct_e_with, ctilde_bound, mpa_solve, MountainPassSetup,
};
use crate::spaces::EmbeddingConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Bvp,
    Sweep,
    Verify,
    Bound,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Bvp => "bvp",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Bound => "bound",
        }
    }
}

/// What a command produced and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// `result.json` envelope: everything but `timestamp` is a pure function
/// of the config.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'static str,
    timestamp: u64,
    config_hash: String,
    config: &'a RunConfig,
    result: T,
}

fn envelope<'a, T: Serialize>(cmd: Command, cfg: &'a RunConfig, result: T) -> Result<Envelope<'a, T>> {
    Ok(Envelope {
        schema_version: SCHEMA_VERSION,
        command: cmd.name(),
        timestamp: unix_timestamp(),
        config_hash: cfg.hash()?,
        config: cfg,
        result,
    })
}

/// Setup without the large vectors, for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetupSummary {
    pub tau: f64,
    pub sigma0: f64,
    pub energy_e: f64,
    pub norm_e: f64,
    pub rho: f64,
    pub eta: f64,
    pub epsilon_c: f64,
    pub c_eps: f64,
    pub growth_exponent: f64,
}

impl From<&MountainPassSetup> for SetupSummary {
    fn from(s: &MountainPassSetup) -> Self {
        Self {
            tau: s.tau,
            sigma0: s.sigma0,
            energy_e: s.energy_e,
            norm_e: s.norm_e,
            rho: s.rho,
            eta: s.eta,
            epsilon_c: s.epsilon_c,
            c_eps: s.c_eps,
            growth_exponent: s.growth_exponent,
        }
    }
}

/// Run one command, writing its files into `out` (created if missing).
pub fn run_command(cmd: Command, cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    cfg.check()?;
    fs::create_dir_all(out)?;
    match cmd {
        Command::Solve => run_solve(cfg, out),
        Command::Bvp => run_bvp(cfg, out),
        Command::Sweep => run_sweep(cfg, out),
        Command::Verify => run_verify(cfg, out),
        Command::Bound => run_bound(cfg, out),
    }
}

fn run_solve(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg.problem_spec()?;
    let setup = construct_e_with(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let ctilde = ctilde_bound(&setup, &spec)?;
    let r = mpa_solve(&spec, &setup, &cfg.mpa)?;
    let f = LineFunctional::with_metric(&spec, cfg.mpa.metric, cfg.mpa.cg)?;
    let hid = h_identity_with(&f, &r.u)?;
    let crit = critical_identity(&f, &r.u)?;
    let k = EmbeddingConstants::for_spec(&spec)?;
    let equiv = metric_equivalence(&f, &r.u, k.theta)?;
    let tol = cfg.mpa.tol;
    let level_chain = setup.eta - tol <= r.level && r.level <= ctilde + tol;
    let passed = r.converged && level_chain;
    let report = serde_json::json!({
        "converged": r.converged,
        "stop_reason": r.stop_reason,
        "level": r.level,
        "ctilde": ctilde,
        "level_chain": level_chain,
        "setup": SetupSummary::from(&setup),
        "h_identity": hid,
        "critical_identity": crit,
        "metric_equivalence": equiv,
        "tail_mass_ratio": tail_mass_ratio(&r.u, spec.varrho())?,
        "path": r.path,
        "embedding_constants": k,
    });
    let files = vec![
        write_json(&out.join("result.json"), &envelope(Command::Solve, cfg, &r)?)?,
        write_solution_csv(&out.join("u.csv"), &r.u)?,
        write_trace_csv(&out.join("trace.csv"), &[("solve".into(), &r.trace)])?,
        write_json(&out.join("report.json"), &report)?,
    ];
    Ok(RunOutcome {
        passed,
        summary: format!(
            "lambda = {}: level = {:.10}, residual = {:.3e}, converged = {}, ctilde = {:.6}",
            spec.lambda, r.level, r.residual, r.converged, ctilde
        ),
        files,
    })
}

fn run_bvp(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg.bvp_spec()?;
    let setup = construct_e_bvp(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let ctilde = bvp_ctilde_bound(&setup, &spec)?;
    let r = bvp_solve(&spec, &setup, &cfg.mpa)?;
    let f = BvpFunctional::new(&spec)?;
    let el = f.el_residual(&r.u)?;
    let unorm = BvpFunctional::interior_euclidean_norm(&r.u);
    let hid = bvp_h_identity(&f, &r.u)?;
    let el_ok = el <= 1e-6 * (1.0 + unorm);
    let passed = r.converged && el_ok && r.level <= ctilde + cfg.mpa.tol;
    let report = serde_json::json!({
        "converged": r.converged,
        "level": r.level,
        "ctilde": ctilde,
        "euler_lagrange_residual": el,
        "euler_lagrange_ok": el_ok,
        "interior_norm": unorm,
        "endpoints": [r.u.at(0), r.u.at(r.u.len() - 1)],
        "h_identity": hid,
        "setup": SetupSummary::from(&setup),
        "path": r.path,
    });
    let files = vec![
        write_json(&out.join("result.json"), &envelope(Command::Bvp, cfg, &r)?)?,
        write_solution_csv(&out.join("u.csv"), &r.u)?,
        write_trace_csv(&out.join("trace.csv"), &[("bvp".into(), &r.trace)])?,
        write_json(&out.join("report.json"), &report)?,
    ];
    Ok(RunOutcome {
        passed,
        summary: format!(
            "interval problem: level = {:.10}, EL residual = {:.3e}, converged = {}",
            r.level, el, r.converged
        ),
        files,
    })
}

fn run_sweep(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg.problem_spec()?;
    let opts = SweepOptions {
        mpa: cfg.mpa.clone(),
        tau: cfg.geometry.tau,
        geometry: cfg.geometry.options(),
        bvp_points: cfg.bvp.points,
        cold: cfg.sweep.cold,
        assert_monotone: cfg.sweep.assert_monotone,
    };
    let sw = lambda_sweep(&spec, &cfg.sweep.lambdas, &opts)?;
    let rep = &sw.report;
    let labels: Vec<String> = rep.records.iter().map(|r| format!("{}", r.lambda)).collect();
    let us: Vec<_> = sw.solutions.iter().map(|s| &s.u).collect();
    let traces: Vec<(String, &[_])> = labels
        .iter()
        .zip(&sw.solutions)
        .map(|(l, s)| (format!("lambda={l}"), s.trace.as_slice()))
        .chain(std::iter::once(("bvp".to_string(), rep.bvp_reference.trace.as_slice())))
        .collect();
    let summary_rows: Vec<_> = rep.records.clone();
    let files = vec![
        write_json(&out.join("result.json"), &envelope(Command::Sweep, cfg, &summary_rows)?)?,
        write_solutions_csv(&out.join("u.csv"), &labels, &us)?,
        write_solution_csv(&out.join("u_bvp.csv"), &rep.bvp_reference.u)?,
        write_trace_csv(&out.join("trace.csv"), &traces)?,
        write_records_csv(&out.join("sweep.csv"), rep)?,
        write_json(&out.join("report.json"), rep)?,
    ];
    let passed = rep
        .records
        .iter()
        .all(|r| r.converged && r.critical_identity.passed && r.level_chain);
    Ok(RunOutcome {
        passed,
        summary: rep
            .records
            .iter()
            .map(|r| {
                format!(
                    "lambda = {}: level = {:.6}, tail = {:.4e}, dist = {:.4}, converged = {}",
                    r.lambda, r.level, r.tail_mass_ratio, r.dist_to_bvp_h_alpha, r.converged
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
        files,
    })
}

fn write_records_csv(path: &Path, rep: &super::sweep::SweepReport) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "lambda",
        "level",
        "residual",
        "cerami_residual",
        "iterations",
        "tail_mass_ratio",
        "dist_to_bvp_h_alpha",
        "converged",
        "critical_identity_gap",
        "h_identity_gap",
        "level_chain",
    ])?;
    for r in &rep.records {
        w.write_record(&[
            r.lambda.to_string(),
            r.level.to_string(),
            r.residual.to_string(),
            r.cerami_residual.to_string(),
            r.iterations.to_string(),
            r.tail_mass_ratio.to_string(),
            r.dist_to_bvp_h_alpha.to_string(),
            r.converged.to_string(),
            r.critical_identity.gap.to_string(),
            r.h_identity_gap.to_string(),
            r.level_chain.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

fn run_verify(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg.problem_spec()?;
    let rep = run_verification_campaign(
        &spec,
        &cfg.verify,
        cfg.seed,
        cfg.geometry.tau,
        &cfg.geometry.options(),
        cfg.mpa.exec,
    )?;
    let passed = rep.passed();
    let failed: Vec<String> = rep.failures().map(|c| format!("{}/{}", c.category, c.name)).collect();
    let files = vec![
        write_json(
            &out.join("result.json"),
            &envelope(
                Command::Verify,
                cfg,
                serde_json::json!({ "passed": passed, "checks": rep.checks.len(), "failed": failed }),
            )?,
        )?,
        write_json(&out.join("report.json"), &rep)?,
    ];
    Ok(RunOutcome {
        passed,
        summary: if passed {
            format!("{} checks passed", rep.checks.len())
        } else {
            format!("failed checks: {}", failed.join(", "))
        },
        files,
    })
}

fn run_bound(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg.problem_spec()?;
    let setup = construct_e_with(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let ctilde = ctilde_bound(&setup, &spec)?;
    let result = serde_json::json!({
        "ctilde": ctilde,
        "setup": SetupSummary::from(&setup),
    });
    let files = vec![
        write_json(&out.join("result.json"), &envelope(Command::Bound, cfg, &result)?)?,
        write_solution_csv(&out.join("psi.csv"), &setup.psi)?,
    ];
    Ok(RunOutcome {
        passed: ctilde > 0.0,
        summary: format!("ctilde = {ctilde:.10} (sigma0 = {}, rho = {}, eta = {:.6e})", setup.sigma0, setup.rho, setup.eta),
        files,
    })
}
