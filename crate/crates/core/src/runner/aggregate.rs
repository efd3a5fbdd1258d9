use std::collections::BTreeMap;

use serde::Serialize;

use super::simulate::RunRecord;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub cycle: u64,
    pub metric: &'static str,
    pub mean: f64,
    pub p5: f64,
    pub p95: f64,
    /// Runs contributing a value at this cycle.
    pub n: usize,
}

/// Cross-run summary, ordered by cycle and then by metric column order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BatchAggregate {
    pub rows: Vec<AggregateRow>,
}

impl BatchAggregate {
    pub fn series(&self, metric: &str) -> impl Iterator<Item = &AggregateRow> + '_ {
        let metric = metric.to_string();
        self.rows.iter().filter(move |r| r.metric == metric)
    }

    pub fn get(&self, cycle: u64, metric: &str) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| r.cycle == cycle && r.metric == metric)
    }
}

/// Percentile of sorted data with linear interpolation between ranks.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    percentile(&v, 0.5)
}

/// Per-cycle mean and 5th/95th percentiles of every metric. Runs without a
/// frame (or value) at a cycle are left out of that cycle's figures.
pub fn aggregate(records: &[RunRecord]) -> BatchAggregate {
    let mut by_cycle: BTreeMap<u64, Vec<Vec<f64>>> = BTreeMap::new();
    let mut names: Vec<&'static str> = Vec::new();
    for rec in records {
        for frame in &rec.frames {
            let values = frame.named_values();
            if names.is_empty() {
                names = values.iter().map(|(n, _)| *n).collect();
            }
            let slot = by_cycle
                .entry(frame.cycle)
                .or_insert_with(|| vec![Vec::new(); values.len()]);
            for (i, (_, v)) in values.iter().enumerate() {
                if let Some(v) = v {
                    slot[i].push(*v);
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (cycle, mut columns) in by_cycle {
        for (i, values) in columns.iter_mut().enumerate() {
            if values.is_empty() {
                continue;
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            values.sort_by(f64::total_cmp);
            rows.push(AggregateRow {
                cycle,
                metric: names[i],
                mean,
                p5: percentile(values, 0.05),
                p95: percentile(values, 0.95),
                n: values.len(),
            });
        }
    }
    BatchAggregate { rows }
}
