//! Command-line front end for the morphoevo simulator.

pub mod config;
pub mod error;
pub mod oracle;
pub mod render;
pub mod stage;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use morphoevo_core::runner::{output, run_batch, run_simulation, BatchAggregate, RunRecord};
use morphoevo_core::{MetricsFrame, SimulationConfig};

use crate::error::{CliError, CliResult};
use crate::stage::write_staged;

/// Runs a single simulation and writes its artifacts into `out`.
pub fn run_single(cfg: &SimulationConfig, run_id: u64, out: &Path) -> CliResult<RunRecord> {
    let mut cfg = cfg.clone();
    cfg.runs = 1;
    let record = run_simulation(&cfg, run_id)?;
    let records = std::slice::from_ref(&record);
    let agg = morphoevo_core::runner::aggregate(records);
    write_staged(out, |stage| Ok(output::write_batch(stage, &cfg, records, &agg)?))?;
    Ok(record)
}

/// Runs `cfg.runs` simulations and writes the batch artifacts into `out`.
pub fn run_batch_to(cfg: &SimulationConfig, out: &Path) -> CliResult<(Vec<RunRecord>, BatchAggregate)> {
    let batch = run_batch(cfg)?;
    write_staged(out, |stage| {
        Ok(output::write_batch(stage, cfg, &batch.records, &batch.aggregate)?)
    })?;
    Ok((batch.records, batch.aggregate))
}

pub const SWEEP_HEADER: &str = "alpha,dir,runs,final_cycle,mean_classes,mean_largest_class,mean_theils_u,mean_cond_entropy";

fn alpha_dir(alpha: f64) -> String {
    format!("alpha_{alpha}")
}

/// One batch per α value under `out/alpha_<value>/`, plus `out/sweep.csv`
/// with the final-cycle means of each batch.
pub fn sweep_alpha(cfg: &SimulationConfig, values: &[f64], out: &Path, mut progress: impl FnMut(f64)) -> CliResult<String> {
    if values.is_empty() {
        return Err(CliError::Schema("sweep-alpha needs at least one value".into()));
    }
    let mut configs = Vec::with_capacity(values.len());
    for &alpha in values {
        let mut c = cfg.clone();
        c.step.alpha = alpha;
        c.validate()?;
        configs.push(c);
    }
    write_staged(out, |stage| {
        let mut summary = String::from(SWEEP_HEADER);
        summary.push('\n');
        for c in &configs {
            progress(c.step.alpha);
            let batch = run_batch(c)?;
            let dir = alpha_dir(c.step.alpha);
            output::write_batch(&stage.join(&dir), c, &batch.records, &batch.aggregate)?;
            let finals: Vec<_> = batch.records.iter().map(RunRecord::final_frame).collect();
            let n = finals.len() as f64;
            let mean = |f: fn(&MetricsFrame) -> f64| finals.iter().map(|m| f(m)).sum::<f64>() / n;
            let last = batch.records.iter().map(|r| r.final_cycle).max().unwrap_or(0);
            let _ = writeln!(
                summary,
                "{},{dir},{},{last},{},{},{},{}",
                c.step.alpha,
                batch.records.len(),
                mean(|m| m.class_count as f64),
                mean(|m| m.largest_class as f64),
                mean(|m| m.mean_theils_u),
                mean(|m| m.mean_cond_entropy)
            );
        }
        fs::write(stage.join("sweep.csv"), &summary)?;
        Ok(summary)
    })
}

/// Parses a comma-separated list of α values.
pub fn parse_values(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Schema(format!("bad alpha value {s:?}")))
        })
        .collect()
}
