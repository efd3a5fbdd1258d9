use serde::{Deserialize, Serialize};

use crate::cellfill::StepConfig;
use crate::error::{config_err, Result};
use crate::lexicon::{init_random_lexicon, Lexicon};
use crate::sampling::SimRng;

use rand::SeedableRng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconSpec {
    pub num_lexemes: usize,
    pub num_cells: usize,
    /// One size per cell, or a single size shared by every cell.
    pub inventory_sizes: Vec<u16>,
    /// `Some(seed)`: every run starts from the same lexicon drawn with this
    /// seed. `None`: each run draws its own from its run stream.
    #[serde(default)]
    pub init_seed: Option<u64>,
}

impl LexiconSpec {
    pub fn uniform(num_lexemes: usize, num_cells: usize, exponents: u16) -> Self {
        LexiconSpec {
            num_lexemes,
            num_cells,
            inventory_sizes: vec![exponents; num_cells],
            init_seed: None,
        }
    }

    fn resolve(&mut self) -> Result<()> {
        if self.inventory_sizes.len() == 1 && self.num_cells > 1 {
            self.inventory_sizes = vec![self.inventory_sizes[0]; self.num_cells];
        }
        if self.inventory_sizes.len() != self.num_cells {
            return config_err(format!(
                "inventory_sizes has {} entries for {} cells",
                self.inventory_sizes.len(),
                self.num_cells
            ));
        }
        Ok(())
    }

    /// Initial lexicon for a run whose stream is `rng`. Draws from `rng` only
    /// when no fixed `init_seed` is set.
    pub fn initial_lexicon(&self, rng: &mut SimRng) -> Result<Lexicon> {
        match self.init_seed {
            Some(seed) => init_random_lexicon(
                self.num_lexemes,
                self.num_cells,
                &self.inventory_sizes,
                &mut SimRng::seed_from_u64(seed),
            ),
            None => init_random_lexicon(self.num_lexemes, self.num_cells, &self.inventory_sizes, rng),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Halting {
    /// Run exactly `total_cycles` cycles.
    FixedCycles,
    /// Stop after this many consecutive cycles without a change, or at
    /// `total_cycles`, whichever comes first.
    UnchangedStreak(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub lexicon: LexiconSpec,
    #[serde(default)]
    pub step: StepConfig,
    pub total_cycles: u64,
    #[serde(default = "default_halting")]
    pub halting: Halting,
    /// Defaults to `max(1, total_cycles / 500)`.
    #[serde(default)]
    pub metric_interval: Option<u64>,
    #[serde(default = "default_snapshot_count")]
    pub snapshot_count: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_halting() -> Halting {
    Halting::FixedCycles
}

fn default_snapshot_count() -> usize {
    8
}

fn default_runs() -> usize {
    1
}

impl SimulationConfig {
    /// Fills defaults, expands shorthand and validates. The result serializes
    /// to a fully explicit config.
    pub fn resolve(mut self) -> Result<Self> {
        self.lexicon.resolve()?;
        if self.metric_interval.is_none() {
            self.metric_interval = Some((self.total_cycles / 500).max(1));
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let lex = &self.lexicon;
        if lex.num_lexemes == 0 {
            return config_err("num_lexemes must be at least 1");
        }
        if lex.inventory_sizes.len() != lex.num_cells {
            return config_err("inventory_sizes must have one entry per cell");
        }
        if lex.inventory_sizes.contains(&0) {
            return config_err("every cell needs at least one exponent");
        }
        self.step
            .validate(lex.num_lexemes, lex.num_cells, &lex.inventory_sizes)?;
        if self.metric_interval == Some(0) {
            return config_err("metric_interval must be at least 1");
        }
        if self.snapshot_count < 2 {
            return config_err("snapshot_count must be at least 2");
        }
        if self.runs == 0 {
            return config_err("runs must be at least 1");
        }
        if let Halting::UnchangedStreak(0) = self.halting {
            return config_err("unchanged_streak must be at least 1");
        }
        Ok(())
    }

    pub fn metric_interval(&self) -> u64 {
        self.metric_interval
            .unwrap_or((self.total_cycles / 500).max(1))
            .max(1)
    }

    /// Gap between the two class sets compared by the turnover metric.
    pub fn turnover_gap(&self) -> u64 {
        (self.total_cycles / 100).max(1)
    }
}
