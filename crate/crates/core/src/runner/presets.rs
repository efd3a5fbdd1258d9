//! Named experiment settings.

use crate::cellfill::{Orientation, StepConfig};
use crate::error::{Error, Result};
use crate::sampling::{SamplePlan, ZipfSpec};

use super::config::{Halting, LexiconSpec, SimulationConfig};

pub const DEFAULT_MASTER_SEED: u64 = 20_240_611;

/// Cycle budget of the partition-edge-case presets; long enough for
/// practically every run to reach uniformity or a partitioned fixed point.
pub const EDGE_PARTITION_CYCLES: u64 = 60_000;

pub const PRESET_NAMES: &[&str] = &[
    "am_tidy",
    "am_no_tidy",
    "esher",
    "sample50",
    "sample20",
    "pivots2_20pc",
    "pivots4_20pc",
    "zipf_cells",
    "zipf_lexemes",
    "edge_partition_k20",
    "edge_partition_k40",
    "edge_partition_k60",
    "edge_partition_k80",
    "edge_partition_k90",
    "alpha01",
    "alpha02",
    "alpha05",
    "alpha067",
    "alpha075",
    "meta_alpha025",
    "meta_alpha05",
    "meta_alpha1",
];

fn rhizo(num_pivots: usize, evidence_fraction: f64, alpha: f64) -> StepConfig {
    StepConfig {
        orientation: Orientation::Rhizomorphome,
        alpha,
        plan: SamplePlan {
            evidence_fraction,
            num_pivots,
            ..SamplePlan::default()
        },
        tidy_up: false,
        esher_mode: false,
    }
}

fn meta(alpha: f64) -> StepConfig {
    // 10 pivot lexemes out of 100; 6 of the 7 non-focal cells as evidence.
    StepConfig {
        orientation: Orientation::Metamorphome,
        alpha,
        plan: SamplePlan {
            evidence_fraction: 6.0 / 7.0,
            num_pivots: 10,
            ..SamplePlan::default()
        },
        tidy_up: false,
        esher_mode: false,
    }
}

fn config(step: StepConfig, total_cycles: u64, runs: usize) -> SimulationConfig {
    SimulationConfig {
        lexicon: LexiconSpec::uniform(100, 8, 5),
        step,
        total_cycles,
        halting: Halting::FixedCycles,
        metric_interval: None,
        snapshot_count: 8,
        runs,
        master_seed: DEFAULT_MASTER_SEED,
    }
}

/// The resolved configuration for a named experiment.
pub fn preset_experiment(name: &str) -> Result<SimulationConfig> {
    let cfg = match name {
        "am_tidy" => {
            let mut step = rhizo(1, 1.0, 0.0);
            step.tidy_up = true;
            config(step, 2_500, 100)
        }
        "am_no_tidy" => config(rhizo(1, 1.0, 0.0), 10_000, 100),
        "esher" => {
            let step = StepConfig {
                orientation: Orientation::Metamorphome,
                esher_mode: true,
                ..StepConfig::default()
            };
            config(step, 30_000, 100)
        }
        "sample50" => config(rhizo(1, 0.5, 0.0), 10_000, 100),
        "sample20" => config(rhizo(1, 0.2, 0.0), 10_000, 100),
        "pivots2_20pc" => config(rhizo(2, 0.2, 0.0), 10_000, 100),
        "pivots4_20pc" => config(rhizo(4, 0.2, 0.0), 10_000, 100),
        "zipf_cells" => {
            let mut step = rhizo(2, 0.2, 0.0);
            step.plan.cell_zipf = ZipfSpec::zipf(1.0);
            config(step, 50_000, 100)
        }
        "zipf_lexemes" => {
            let mut step = rhizo(2, 0.2, 0.0);
            step.plan.lexeme_zipf = ZipfSpec::zipf(1.0);
            config(step, 100_000, 100)
        }
        "alpha01" => config(rhizo(4, 0.2, 0.1), 20_000, 20),
        "alpha02" => config(rhizo(4, 0.2, 0.2), 20_000, 20),
        "alpha05" => config(rhizo(4, 0.2, 0.5), 50_000, 20),
        "alpha067" => config(rhizo(4, 0.2, 0.67), 100_000, 20),
        "alpha075" => config(rhizo(4, 0.2, 0.75), 100_000, 20),
        "meta_alpha025" => config(meta(0.25), 20_000, 100),
        "meta_alpha05" => config(meta(0.5), 20_000, 100),
        "meta_alpha1" => config(meta(1.0), 50_000, 100),
        other => match other.strip_prefix("edge_partition_k") {
            Some(k @ ("20" | "40" | "60" | "80" | "90")) => {
                let mut c = config(rhizo(1, 1.0, 0.0), EDGE_PARTITION_CYCLES, 500);
                c.lexicon = LexiconSpec::uniform(100, 8, k.parse().expect("literal"));
                c
            }
            _ => return Err(Error::UnknownPreset(name.to_string())),
        },
    };
    cfg.resolve()
}
