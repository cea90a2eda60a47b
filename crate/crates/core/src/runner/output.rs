use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Result;
use crate::fracops::GridFunction;
use crate::mpa::TraceEntry;

/// Key of the only field allowed to differ between identical runs.
pub const TIMESTAMP_KEY: &str = "timestamp";

/// Seconds since the Unix epoch.
pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

/// Drop the top-level timestamp from a JSON document, for comparisons.
pub fn strip_timestamp(json: &str) -> Result<String> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    if let Some(m) = v.as_object_mut() {
        m.remove(TIMESTAMP_KEY);
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

/// Columns `t, abs_u, u_0, …, u_{n-1}`.
pub fn write_solution_csv(path: &Path, u: &GridFunction) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path)?;
    let d = u.dim();
    let mut header = vec!["t".to_string(), "abs_u".to_string()];
    header.extend((0..d).map(|c| format!("u_{c}")));
    w.write_record(&header)?;
    let mags = u.magnitudes();
    for j in 0..u.len() {
        let mut row = vec![u.grid().node(j).to_string(), mags[j].to_string()];
        row.extend(u.at(j).iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// Columns `t, abs_u_<λ₁>, abs_u_<λ₂>, …` for solutions on a shared grid.
pub fn write_solutions_csv(path: &Path, labels: &[String], us: &[&GridFunction]) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(labels.iter().map(|l| format!("abs_u_{l}")));
    w.write_record(&header)?;
    let mags: Vec<Vec<f64>> = us.iter().map(|u| u.magnitudes()).collect();
    if let Some(first) = us.first() {
        for j in 0..first.len() {
            let mut row = vec![first.grid().node(j).to_string()];
            row.extend(mags.iter().map(|m| m[j].to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// Columns `run, iteration, level, residual, cerami_residual, step,
/// linear_iterations, path_nodes`.
pub fn write_trace_csv(path: &Path, traces: &[(String, &[TraceEntry])]) -> Result<PathBuf> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record([
        "run",
        "iteration",
        "level",
        "residual",
        "cerami_residual",
        "step",
        "linear_iterations",
        "path_nodes",
    ])?;
    for (run, trace) in traces {
        for e in trace.iter() {
            w.write_record(&[
                run.clone(),
                e.iteration.to_string(),
                e.level.to_string(),
                e.residual.to_string(),
                e.cerami_residual.to_string(),
                e.step.to_string(),
                e.linear_iterations.to_string(),
                e.path_nodes.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(path.to_path_buf())
}
