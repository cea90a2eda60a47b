//! End-to-end acceptance checks. Every check prints one `PASS`/`FAIL` line;
//! the process exits non-zero if any check fails. The reference values are
//! computed here, independently of the library code under test.

use std::fs;
use std::process::ExitCode;

use fracmp::fracops::special::gamma;
use fracmp::fracops::{
    grunwald_left_rl, liouville_weyl_left, quadratic_form_alpha, Extension, GridFunction, IntervalGrid,
    RealLineGrid,
};
use fracmp::functional::{
    bvp_derivative_action, bvp_energy, derivative_action, energy, h_identity, h_identity_with, BvpFunctional,
    LineFunctional, ProblemSpec,
};
use fracmp::mpa::{
    bvp_ctilde_bound, bvp_solve, construct_e_bvp, construct_e_with, ctilde_bound, mpa_solve, mpa_solve_from,
    MpaConfig,
};
use fracmp::runner::{
    critical_identity, geometry_floor, lambda_sweep, run_command, strip_timestamp, Command, RunConfig,
    SweepOptions,
};
use fracmp::spaces::{
    draw_interval_sample, draw_line_sample, verify_embeddings, EmbeddingConstants, SampleFamily, VerifyOptions,
};
use fracmp::{Exec, FracError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), FracError>;

const SEED: u64 = 20240611;

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Left Liouville-Weyl derivative of a decaying smooth `u` at `t` by direct
/// quadrature of `(1/Γ(1-α)) ∫_0^∞ ξ^{-α} u'(t-ξ) dξ`. The substitution
/// `ξ = y^{1/(1-α)}` removes the endpoint singularity.
fn lw_quadrature(du: impl Fn(f64) -> f64, t: f64, alpha: f64, reach: f64) -> f64 {
    let q = 1.0 / (1.0 - alpha);
    let ymax = (t + reach).max(0.0).powf(1.0 - alpha);
    if ymax == 0.0 {
        return 0.0;
    }
    simpson(|y| du(t - y.powf(q)), 0.0, ymax, 40_000) / gamma(2.0 - alpha)
}

fn derivative_operators() -> Outcome {
    let alpha = 0.75;
    let grid = RealLineGrid::new(20.0, 4096)?;
    let mut worst_lw = 0.0f64;
    for (center, width) in [(0.0, 1.0), (1.3, 0.5), (-2.0, 1.5)] {
        let u = GridFunction::from_fn(grid, |t| (-((t - center) / width).powi(2)).exp());
        let du = |t: f64| -2.0 * (t - center) / (width * width) * (-((t - center) / width).powi(2)).exp();
        let d = liouville_weyl_left(&u, alpha, Extension::Zero)?;
        let mut err = 0.0f64;
        let mut scale = 0.0f64;
        for j in (0..grid.num_points()).step_by(16) {
            let t = grid.node(j);
            if !(-8.0..=12.0).contains(&t) {
                continue;
            }
            let exact = lw_quadrature(du, t, alpha, 8.0 * width - center);
            err = err.max((d.at(j)[0] - exact).abs());
            scale = scale.max(exact.abs());
        }
        worst_lw = worst_lw.max(err / scale);
    }

    // GL on u(t) = t² over [0, 1]: D^α u = Γ(3)/Γ(3-α) t^{2-α}.
    let exact = |t: f64| gamma(3.0) / gamma(3.0 - alpha) * t.powf(2.0 - alpha);
    let gl_error = |n: usize| -> Result<f64, FracError> {
        let g = IntervalGrid::new(0.0, 1.0, n)?;
        let u = GridFunction::from_fn(g, |t| t * t);
        let d = grunwald_left_rl(&u, alpha)?;
        Ok((0..n)
            .filter(|&i| g.node(i) >= 0.5)
            .map(|i| (d.at(i)[0] - exact(g.node(i))).abs())
            .fold(0.0, f64::max))
    };
    let errs: Vec<f64> = [65, 129, 257, 513].iter().map(|&n| gl_error(n)).collect::<Result<_, _>>()?;
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let min_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        worst_lw <= 1e-6 && min_order >= 0.9,
        format!("LW relative error {worst_lw:.2e}; GL observed orders {orders:.3?}"),
    ))
}

fn quadratic_form() -> Outcome {
    let alpha = 0.75;
    let grid = RealLineGrid::new(20.0, 4096)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dw = grid.frequency_spacing();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let count = rng.random_range(1..=6);
        let mut ks: Vec<usize> = (0..count).map(|_| rng.random_range(1..400)).collect();
        ks.sort_unstable();
        ks.dedup();
        let modes: Vec<(f64, f64, f64)> = ks
            .iter()
            .map(|&k| (k as f64 * dw, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let u = GridFunction::from_fn(grid, |t| modes.iter().map(|(w, c, s)| c * (w * t).cos() + s * (w * t).sin()).sum());
        // ∫_{-R}^{R} cos² = ∫ sin² = R for on-grid frequencies.
        let exact: f64 = modes.iter().map(|(w, c, s)| grid.halfwidth() * w.powf(2.0 * alpha) * (c * c + s * s)).sum();
        let q = quadratic_form_alpha(&u, alpha)?;
        let lw = liouville_weyl_left(&u, alpha, Extension::Periodic)?.l2_norm_sq();
        worst = worst.max((q - lw).abs() / lw).max((q - exact).abs() / exact);
    }
    Ok((worst <= 1e-10, format!("worst relative gap over 100 band-limited functions {worst:.2e}")))
}

fn embeddings() -> Outcome {
    let base = ProblemSpec::default();
    let k = EmbeddingConstants::for_spec(&base)?;
    let mut lines = Vec::new();
    let mut ok = true;
    for lambda in [k.lambda_floor, 1e3 * k.lambda_floor] {
        let spec = base.with_lambda(lambda);
        let opts = VerifyOptions {
            seed: SEED,
            ..VerifyOptions::default()
        };
        match verify_embeddings(1000, &spec, &opts) {
            Ok(rep) => {
                let worst = rep.inequalities.iter().map(|r| r.worst_ratio).fold(0.0, f64::max);
                ok &= worst <= 1.0 + 1e-8 && rep.inequalities.iter().all(|r| r.passed);
                lines.push(format!("λ={lambda:.4}: worst ratio {worst:.6}"));
            }
            Err(FracError::InequalityViolated { name, ratio, .. }) => {
                ok = false;
                lines.push(format!("λ={lambda:.4}: {name} violated, ratio {ratio}"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((ok, lines.join("; ")))
}

fn central_difference(e: impl Fn(&GridFunction) -> Result<f64, FracError>, u: &GridFunction, v: &GridFunction) -> Result<f64, FracError> {
    let h = 1e-4;
    Ok((e(&u.axpy(h, v)?)? - e(&u.axpy(-h, v)?)?) / (2.0 * h))
}

fn derivative_check() -> Outcome {
    let spec = ProblemSpec::default();
    let cfg = RunConfig::default();
    let bspec = cfg.bvp_spec()?;
    let mut worst_line = 0.0f64;
    let mut worst_bvp = 0.0f64;
    for id in 0..12u64 {
        let fam = SampleFamily::ALL[id as usize % 3];
        let u = draw_line_sample(SEED, 2 * id, fam, &spec.grid, spec.dim).render_line(&spec.grid, spec.dim);
        let v = draw_line_sample(SEED, 2 * id + 1, fam, &spec.grid, spec.dim).render_line(&spec.grid, spec.dim);
        let fd = central_difference(|w| energy(w, &spec), &u, &v)?;
        let da = derivative_action(&u, &v, &spec)?;
        worst_line = worst_line.max((fd - da).abs() / (1.0 + da.abs()));

        let u = draw_interval_sample(SEED, 2 * id, fam, &bspec.grid, bspec.dim).render_interval(&bspec.grid, bspec.dim);
        let v = draw_interval_sample(SEED, 2 * id + 1, fam, &bspec.grid, bspec.dim).render_interval(&bspec.grid, bspec.dim);
        let fd = central_difference(|w| bvp_energy(w, &bspec), &u, &v)?;
        let da = bvp_derivative_action(&u, &v, &bspec)?;
        worst_bvp = worst_bvp.max((fd - da).abs() / (1.0 + da.abs()));
    }
    Ok((
        worst_line <= 1e-6 && worst_bvp <= 1e-6,
        format!("worst relative mismatch: line {worst_line:.2e}, interval {worst_bvp:.2e}"),
    ))
}

fn h_identities() -> Outcome {
    let spec = ProblemSpec::default();
    let mut worst = 0.0f64;
    for id in 0..100u64 {
        let fam = SampleFamily::ALL[id as usize % 3];
        let u = draw_line_sample(SEED ^ 0x5a, id, fam, &spec.grid, spec.dim).render_line(&spec.grid, spec.dim);
        let h = h_identity(&u, &spec)?;
        worst = worst.max(h.gap / (1.0 + h.lhs.abs()));
    }
    let cfg = RunConfig::default();
    let setup = construct_e_with(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let r = mpa_solve(&spec, &setup, &cfg.mpa)?;
    let f = LineFunctional::with_metric(&spec, cfg.mpa.metric, cfg.mpa.cg)?;
    let hc = h_identity_with(&f, &r.u)?;
    let crit = hc.gap / (1.0 + r.level);
    Ok((
        worst <= 1e-10 && crit <= 1e-6,
        format!("random: worst {worst:.2e}; at the critical point: {crit:.2e}"),
    ))
}

fn geometry() -> Outcome {
    let cfg = RunConfig::default();
    let spec = cfg.problem_spec()?;
    let opts = cfg.geometry.options();
    let setup = construct_e_with(&spec, cfg.geometry.tau, &opts)?;
    let f = LineFunctional::new(&spec)?;
    let (floor, _) = geometry_floor(&f, setup.rho, 200, SEED, Exec::default())?;
    let e_energy = energy(&setup.e, &spec)?;
    let s1 = construct_e_with(&spec.with_lambda(1.0), cfg.geometry.tau, &opts)?.sigma0;
    let s2 = construct_e_with(&spec.with_lambda(1000.0), cfg.geometry.tau, &opts)?.sigma0;
    Ok((
        floor >= setup.eta && e_energy < 0.0 && s1.to_bits() == s2.to_bits(),
        format!(
            "min energy on sphere {floor:.4e} ≥ η = {:.4e}; I(e) = {e_energy:.4}; σ₀ at λ=1,1000: {s1}, {s2}",
            setup.eta
        ),
    ))
}

fn mountain_pass() -> Outcome {
    let cfg = RunConfig::default();
    let spec = cfg.problem_spec()?;
    let setup = construct_e_with(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let ctilde = ctilde_bound(&setup, &spec)?;
    let r = mpa_solve(&spec, &setup, &cfg.mpa)?;
    let scaled_res = (1.0 + r.norm) * r.residual;

    // Independent re-run: finer path, tighter tolerance, perturbed endpoint.
    let mut alt = setup.clone();
    let amp = 0.02 * setup.e.sup_norm();
    let bump = GridFunction::from_fn(spec.grid, |t| amp * (-(t - 0.4) * (t - 0.4)).exp());
    alt.e = setup.e.axpy(1.0, &bump)?;
    alt.energy_e = energy(&alt.e, &spec)?;
    alt.norm_e = LineFunctional::new(&spec)?.x_norm_sq(&alt.e)?.sqrt();
    let fine = MpaConfig {
        path_nodes: 2 * cfg.mpa.path_nodes,
        tol: 0.5 * cfg.mpa.tol,
        ..cfg.mpa.clone()
    };
    let r2 = mpa_solve_from(&spec, &alt, &fine, None)?;
    let agree = (r.level - r2.level).abs();
    Ok((
        r.converged
            && scaled_res <= 1e-6
            && r.level > 0.0
            && r.level <= ctilde
            && alt.energy_e < 0.0
            && r2.converged
            && agree <= 1e-3,
        format!(
            "level {:.8} ∈ (0, {ctilde:.4}]; (1+‖u‖)·res {scaled_res:.2e}; rerun level {:.8} (Δ {agree:.1e})",
            r.level, r2.level
        ),
    ))
}

fn interval_problem() -> Outcome {
    let cfg = RunConfig::default();
    let spec = cfg.bvp_spec()?;
    let setup = construct_e_bvp(&spec, cfg.geometry.tau, &cfg.geometry.options())?;
    let ctilde = bvp_ctilde_bound(&setup, &spec)?;
    let r = bvp_solve(&spec, &setup, &cfg.mpa)?;
    let f = BvpFunctional::new(&spec)?;
    let el = f.el_residual(&r.u)?;
    let norm = BvpFunctional::interior_euclidean_norm(&r.u);
    let ends = r.u.at(0).iter().chain(r.u.at(r.u.len() - 1)).all(|&x| x == 0.0);
    Ok((
        r.converged && el <= 1e-6 * (1.0 + norm) && ends,
        format!("EL residual {el:.2e} (norm {norm:.3}); endpoints exactly zero: {ends}; level {:.6} ≤ {ctilde:.4}", r.level),
    ))
}

fn concentration() -> Outcome {
    let cfg = RunConfig::default();
    let spec = cfg.problem_spec()?;
    let opts = SweepOptions {
        mpa: cfg.mpa.clone(),
        tau: cfg.geometry.tau,
        geometry: cfg.geometry.options(),
        bvp_points: cfg.bvp.points,
        cold: false,
        assert_monotone: false,
    };
    let out = lambda_sweep(&spec, &[1.0, 10.0, 100.0, 1000.0], &opts)?;
    let recs = &out.report.records;
    let tails: Vec<f64> = recs.iter().map(|r| r.tail_mass_ratio).collect();
    let dists: Vec<f64> = recs.iter().map(|r| r.dist_to_bvp_h_alpha).collect();
    let strictly_down = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let mut ident_ok = true;
    for (rec, sol) in recs.iter().zip(&out.solutions) {
        let f = LineFunctional::new(&spec.with_lambda(rec.lambda))?;
        let c = critical_identity(&f, &sol.u)?;
        ident_ok &= c.gap <= 1e-6 * (1.0 + c.x_norm_sq);
    }
    Ok((
        strictly_down(&tails) && strictly_down(&dists) && ident_ok && recs.iter().all(|r| r.converged),
        format!(
            "tail mass {}; distance {dists:.4?}; identity at critical points: {ident_ok}",
            tails.iter().map(|t| format!("{t:.3e}")).collect::<Vec<_>>().join(" > ")
        ),
    ))
}

fn reproducibility() -> Outcome {
    let a = tempfile::tempdir()?;
    let b = tempfile::tempdir()?;
    let cfg = RunConfig::default();
    run_command(Command::Solve, &cfg, a.path())?;
    run_command(Command::Solve, &cfg, b.path())?;
    let ra = strip_timestamp(&fs::read_to_string(a.path().join("result.json"))?)?;
    let rb = strip_timestamp(&fs::read_to_string(b.path().join("result.json"))?)?;
    let mut same = ra == rb;
    for f in ["u.csv", "trace.csv", "report.json"] {
        same &= fs::read(a.path().join(f))? == fs::read(b.path().join(f))?;
    }
    Ok((same, format!("two solve runs identical apart from the timestamp: {same}")))
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("derivative operators match quadrature and closed forms", derivative_operators),
        ("quadratic form equals the squared derivative norm", quadratic_form),
        ("embedding inequalities hold at and above the λ floor", embeddings),
        ("derivative action matches finite differences", derivative_check),
        ("energy identity with H holds", h_identities),
        ("mountain-pass geometry", geometry),
        ("mountain-pass solution on the line", mountain_pass),
        ("Dirichlet problem on the well interval", interval_problem),
        ("concentration as λ grows", concentration),
        ("reproducible result files", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, run)) in checks.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("{} {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance check(s) failed");
        ExitCode::FAILURE
    }
}
