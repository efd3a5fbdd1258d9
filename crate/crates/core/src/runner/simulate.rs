use rayon::prelude::*;
use serde::Serialize;

use crate::cellfill::CellFiller;
use crate::error::Result;
use crate::lexicon::Lexicon;
use crate::metrics::{evaluate, MetricsFrame};
use crate::sampling::{run_rng, SimRng};

use super::aggregate::{aggregate, BatchAggregate};
use super::config::{Halting, SimulationConfig};
use super::tracker::ClassTracker;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub cycle: u64,
    pub csv: String,
}

/// Trajectory of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub master_seed: u64,
    pub frames: Vec<MetricsFrame>,
    pub snapshots: Vec<Snapshot>,
    pub changed_cycles: u64,
    pub unchanged_cycles: u64,
    pub final_cycle: u64,
    /// First cycle at which one class holds at least half of the initial
    /// lexemes.
    pub half_coverage_cycle: Option<u64>,
    #[serde(skip)]
    pub final_lexicon: Lexicon,
}

impl RunRecord {
    pub fn final_frame(&self) -> &MetricsFrame {
        self.frames.last().expect("a run always records cycle 0")
    }

    /// Latest frame at or before `cycle`.
    pub fn frame_at(&self, cycle: u64) -> Option<&MetricsFrame> {
        let i = self.frames.partition_point(|f| f.cycle <= cycle);
        i.checked_sub(1).map(|i| &self.frames[i])
    }
}

/// Cycles at which snapshots are taken, evenly spaced from 0 to `last`.
pub fn snapshot_cycles(last: u64, count: usize) -> Vec<u64> {
    let k = (count.max(2) - 1) as u128;
    let mut cycles: Vec<u64> = (0..=k).map(|t| (t * last as u128 / k) as u64).collect();
    cycles.dedup();
    cycles
}

struct Run {
    lexicon: Lexicon,
    filler: CellFiller,
    rng: SimRng,
}

fn start(cfg: &SimulationConfig, run_id: u64) -> Result<Run> {
    let mut rng = run_rng(cfg.master_seed, run_id);
    let mut lexicon = cfg.lexicon.initial_lexicon(&mut rng)?;
    if cfg.step.tidy_up {
        lexicon.remove_duplicate_rows();
    }
    let filler = CellFiller::new(&cfg.step, &lexicon)?;
    Ok(Run { lexicon, filler, rng })
}

/// Cycle at which the run stops. For streak halting this replays the run.
fn final_cycle(cfg: &SimulationConfig, run_id: u64) -> Result<u64> {
    let Halting::UnchangedStreak(limit) = cfg.halting else {
        return Ok(cfg.total_cycles);
    };
    let mut run = start(cfg, run_id)?;
    let mut streak = 0;
    for cycle in 1..=cfg.total_cycles {
        let rec = run.filler.step(&mut run.lexicon, cycle, &mut run.rng);
        streak = if rec.changed { 0 } else { streak + 1 };
        if streak >= limit {
            return Ok(cycle);
        }
    }
    Ok(cfg.total_cycles)
}

/// Runs one simulation. The result depends only on `cfg` and `run_id`.
pub fn run_simulation(cfg: &SimulationConfig, run_id: u64) -> Result<RunRecord> {
    cfg.validate()?;
    let last = final_cycle(cfg, run_id)?;
    let Run {
        mut lexicon,
        mut filler,
        mut rng,
    } = start(cfg, run_id)?;
    let orientation = cfg.step.orientation;
    let interval = cfg.metric_interval();
    let gap = cfg.turnover_gap();
    let half = lexicon.num_lexemes().div_ceil(2);

    let mut tracker = ClassTracker::new(&lexicon);
    let shots = snapshot_cycles(last, cfg.snapshot_count);
    let mut next_shot = 0;
    let mut snapshots = Vec::with_capacity(shots.len());
    let mut frames = Vec::with_capacity((last / interval) as usize + 2);

    let mut record = |lexicon: &Lexicon, tracker: &mut ClassTracker, cycle: u64| {
        if cycle.is_multiple_of(interval) || cycle == last {
            let mut frame = evaluate(lexicon, orientation, cycle);
            frame.turnover = tracker.turnover(cycle, gap);
            frames.push(frame);
        }
        while next_shot < shots.len() && shots[next_shot] == cycle {
            snapshots.push(Snapshot {
                cycle,
                csv: lexicon.to_csv(),
            });
            next_shot += 1;
        }
    };

    let initial_largest = lexicon.class_sizes().values().copied().max().unwrap_or(0);
    let mut half_coverage_cycle = (initial_largest >= half).then_some(0);
    record(&lexicon, &mut tracker, 0);
    let mut changed_cycles = 0;
    for cycle in 1..=last {
        let rec = filler.step(&mut lexicon, cycle, &mut rng);
        let focal_class = tracker.apply(&lexicon, &rec);
        if rec.changed {
            changed_cycles += 1;
            if half_coverage_cycle.is_none() && focal_class >= half {
                half_coverage_cycle = Some(cycle);
            }
        }
        record(&lexicon, &mut tracker, cycle);
    }
    debug_assert_eq!(tracker.class_count(), lexicon.distinct_classes().len());

    Ok(RunRecord {
        run_id,
        master_seed: cfg.master_seed,
        frames,
        snapshots,
        changed_cycles,
        unchanged_cycles: last - changed_cycles,
        final_cycle: last,
        half_coverage_cycle,
        final_lexicon: lexicon,
    })
}

pub struct Batch {
    /// Ordered by run id.
    pub records: Vec<RunRecord>,
    pub aggregate: BatchAggregate,
}

/// Runs `cfg.runs` simulations in parallel and aggregates them.
pub fn run_batch(cfg: &SimulationConfig) -> Result<Batch> {
    let records = run_many(cfg, 0..cfg.runs as u64)?;
    let aggregate = aggregate(&records);
    Ok(Batch { records, aggregate })
}

/// Runs the given run ids in parallel; output follows the input order.
pub fn run_many(cfg: &SimulationConfig, run_ids: impl IntoIterator<Item = u64>) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let ids: Vec<u64> = run_ids.into_iter().collect();
    ids.par_iter().map(|&id| run_simulation(cfg, id)).collect()
}
