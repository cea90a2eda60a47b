//! Experiment orchestration: TOML configuration, `λ` sweeps, verification
//! campaigns and the run-directory layout used by the command-line tool.
//!
//! Every command writes into one directory: `result.json` (the config,
//! its hash and the result; only the `timestamp` field varies between
//! identical runs), `u.csv`, `trace.csv` and `report.json`.

mod campaign;
mod commands;
mod config;
mod output;
mod sweep;

pub use campaign::{geometry_floor, run_verification_campaign, CampaignCheck, CampaignReport};
pub use commands::{run_command, Command, RunOutcome, SetupSummary};
pub use config::{
    hash_canonical, BvpSection, GeometrySection, GridSection, ProblemSection, RunConfig, SweepSection,
    VerifySection, SCHEMA_VERSION,
};
pub use output::{
    strip_timestamp, unix_timestamp, write_json, write_solution_csv, write_solutions_csv, write_trace_csv,
    TIMESTAMP_KEY,
};
pub use sweep::{
    critical_identity, embed_interval, lambda_sweep, tail_mass_ratio, CriticalIdentity, SweepOptions,
    SweepOutput, SweepRecord, SweepReport,
};
