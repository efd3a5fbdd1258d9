//! Simulation orchestration: configs, presets, single runs, batches and
//! their artifacts.

mod aggregate;
mod config;
pub mod output;
mod presets;
mod simulate;
mod tracker;

pub use aggregate::{aggregate, median, percentile, AggregateRow, BatchAggregate};
pub use config::{Halting, LexiconSpec, SimulationConfig};
pub use presets::{preset_experiment, DEFAULT_MASTER_SEED, EDGE_PARTITION_CYCLES, PRESET_NAMES};
pub use simulate::{run_batch, run_many, run_simulation, snapshot_cycles, Batch, RunRecord, Snapshot};
pub use tracker::ClassTracker;
