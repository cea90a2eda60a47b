use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracmp::runner::{run_command, Command, RunConfig};
use fracmp::FracError;

/// Mountain-pass solver for fractional Hamiltonian systems.
#[derive(Parser, Debug)]
#[command(name = "fracmp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve on the whole line at a single λ.
    Solve(Common),
    /// Solve the Dirichlet problem on the well interval.
    Bvp(Common),
    /// Solve for an increasing list of λ and check concentration.
    Sweep(SweepArgs),
    /// Run the sampling verifiers (hypotheses, embeddings, geometry, identities).
    Verify(VerifyArgs),
    /// Print the geometry and the upper bound for the critical level.
    Bound(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML config; defaults are used for missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override λ.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated, strictly increasing λ values.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Start every λ from its own endpoint instead of the previous solution.
    #[arg(long)]
    cold: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Override the embedding sample budget.
    #[arg(long)]
    samples: Option<usize>,
}

fn load(c: &Common) -> fracmp::Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg = cfg.with_seed(s);
    }
    if let Some(l) = c.lambda {
        cfg.problem.lambda = l;
    }
    Ok(cfg)
}

fn build(cmd: &Cmd) -> fracmp::Result<(Command, RunConfig, PathBuf)> {
    Ok(match cmd {
        Cmd::Solve(c) => (Command::Solve, load(c)?, c.out.clone()),
        Cmd::Bvp(c) => (Command::Bvp, load(c)?, c.out.clone()),
        Cmd::Bound(c) => (Command::Bound, load(c)?, c.out.clone()),
        Cmd::Sweep(a) => {
            let mut cfg = load(&a.common)?;
            if let Some(l) = &a.lambdas {
                cfg.sweep.lambdas = l.clone();
            }
            cfg.sweep.cold |= a.cold;
            (Command::Sweep, cfg, a.common.out.clone())
        }
        Cmd::Verify(a) => {
            let mut cfg = load(&a.common)?;
            if let Some(n) = a.samples {
                cfg.verify.samples = n;
            }
            (Command::Verify, cfg, a.common.out.clone())
        }
    })
}

fn exit_code(e: &FracError) -> u8 {
    match e {
        FracError::Config(_) | FracError::ConfigParse(_) | FracError::Domain(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build(&cli.command).and_then(|(cmd, cfg, out)| run_command(cmd, &cfg, &out));
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
