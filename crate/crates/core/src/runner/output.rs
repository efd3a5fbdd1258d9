//! Batch artifacts: metrics, aggregate and snapshot CSVs plus the resolved
//! config.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

use super::aggregate::BatchAggregate;
use super::config::SimulationConfig;
use super::simulate::RunRecord;

pub const METRICS_HEADER: &str = "run_id,cycle,mean_cond_entropy,mean_theils_u,classes,mean_exponents_per_cell,turnover,largest_class,second_class,zones";
pub const AGGREGATE_HEADER: &str = "cycle,metric,mean,p5,p95";

pub fn metrics_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for rec in records {
        for f in &rec.frames {
            let turnover = f.turnover.map(|t| t.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                rec.run_id,
                f.cycle,
                f.mean_cond_entropy,
                f.mean_theils_u,
                f.class_count,
                f.mean_exponents_per_cell,
                turnover,
                f.largest_class,
                f.second_class,
                f.zone_count
            );
        }
    }
    out
}

pub fn aggregate_csv(agg: &BatchAggregate) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for r in &agg.rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.cycle, r.metric, r.mean, r.p5, r.p95);
    }
    out
}

pub fn config_json(cfg: &SimulationConfig) -> Result<String> {
    let mut s = serde_json::to_string_pretty(cfg)?;
    s.push('\n');
    Ok(s)
}

/// Writes `config.json`, `metrics.csv`, `aggregate.csv` and
/// `snapshots/run<id>_cycle<n>.csv` into `dir`.
pub fn write_batch(dir: &Path, cfg: &SimulationConfig, records: &[RunRecord], agg: &BatchAggregate) -> Result<()> {
    fs::create_dir_all(dir.join("snapshots"))?;
    fs::write(dir.join("config.json"), config_json(cfg)?)?;
    fs::write(dir.join("metrics.csv"), metrics_csv(records))?;
    fs::write(dir.join("aggregate.csv"), aggregate_csv(agg))?;
    for rec in records {
        for shot in &rec.snapshots {
            let name = format!("run{}_cycle{}.csv", rec.run_id, shot.cycle);
            fs::write(dir.join("snapshots").join(name), &shot.csv)?;
        }
    }
    Ok(())
}
