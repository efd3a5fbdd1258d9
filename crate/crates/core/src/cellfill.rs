//! Cell-filling strategies.
//!
//! One step holds out a single cell of a single lexeme and refills it by
//! analogy. Rhizomorphome steps compare lexemes through pivot cells;
//! metamorphome steps compare cells through pivot lexemes. Matching evidence
//! votes +1 for its exponent, contrasting evidence votes `-alpha`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::lexicon::{ExponentId, Lexicon};
use crate::sampling::{draw_excluding, draw_focus, SamplePlan, ZipfSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Inflection classes: pivots are cells, evidence items are lexemes.
    Rhizomorphome,
    /// Morphomic zones: pivots are lexemes, evidence items are cells.
    Metamorphome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "StepConfigRepr", into = "StepConfigRepr")]
pub struct StepConfig {
    pub orientation: Orientation,
    /// Weight of each contrasting vote; 0 gives the associative-only model.
    pub alpha: f64,
    pub plan: SamplePlan,
    /// Delete lexemes that become identical to the focal lexeme.
    pub tidy_up: bool,
    /// Metamorphome only: identity copies the pivot, contrast picks at random.
    pub esher_mode: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct StepConfigRepr {
    orientation: Orientation,
    alpha: f64,
    num_pivots: usize,
    evidence_fraction: f64,
    tidy_up: bool,
    esher_mode: bool,
    lexeme_zipf: ZipfSpec,
    cell_zipf: ZipfSpec,
    per_pivot_resample: bool,
}

impl Default for StepConfigRepr {
    fn default() -> Self {
        StepConfig::default().into()
    }
}

impl From<StepConfigRepr> for StepConfig {
    fn from(r: StepConfigRepr) -> Self {
        StepConfig {
            orientation: r.orientation,
            alpha: r.alpha,
            plan: SamplePlan {
                evidence_fraction: r.evidence_fraction,
                num_pivots: r.num_pivots,
                lexeme_zipf: r.lexeme_zipf,
                cell_zipf: r.cell_zipf,
                per_pivot_resample: r.per_pivot_resample,
            },
            tidy_up: r.tidy_up,
            esher_mode: r.esher_mode,
        }
    }
}

impl From<StepConfig> for StepConfigRepr {
    fn from(c: StepConfig) -> Self {
        StepConfigRepr {
            orientation: c.orientation,
            alpha: c.alpha,
            num_pivots: c.plan.num_pivots,
            evidence_fraction: c.plan.evidence_fraction,
            tidy_up: c.tidy_up,
            esher_mode: c.esher_mode,
            lexeme_zipf: c.plan.lexeme_zipf,
            cell_zipf: c.plan.cell_zipf,
            per_pivot_resample: c.plan.per_pivot_resample,
        }
    }
}

impl Default for StepConfig {
    /// One pivot, all evidence, no dissociative votes, no tidying-up.
    fn default() -> Self {
        StepConfig {
            orientation: Orientation::Rhizomorphome,
            alpha: 0.0,
            plan: SamplePlan::default(),
            tidy_up: false,
            esher_mode: false,
        }
    }
}

impl StepConfig {
    /// Checks the configuration against lexicon dimensions.
    pub fn validate(&self, num_lexemes: usize, num_cells: usize, inventory_sizes: &[u16]) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return config_err(format!("alpha must be a non-negative number, got {}", self.alpha));
        }
        self.plan.validate()?;
        if num_cells < 2 {
            return config_err("at least two cells are required");
        }
        match self.orientation {
            Orientation::Rhizomorphome => {
                if self.esher_mode {
                    return config_err("esher_mode requires orientation = metamorphome");
                }
                if self.plan.num_pivots > num_cells - 1 {
                    return config_err(format!(
                        "num_pivots = {} but only {} non-focal cells exist",
                        self.plan.num_pivots,
                        num_cells - 1
                    ));
                }
            }
            Orientation::Metamorphome => {
                if self.tidy_up {
                    return config_err("tidy_up is only defined for orientation = rhizomorphome");
                }
                if num_lexemes < 2 {
                    return config_err("metamorphome steps need at least two lexemes");
                }
                if !self.esher_mode && self.plan.num_pivots > num_lexemes - 1 {
                    return config_err(format!(
                        "num_pivots = {} but only {} non-focal lexemes exist",
                        self.plan.num_pivots,
                        num_lexemes - 1
                    ));
                }
                if inventory_sizes.windows(2).any(|w| w[0] != w[1]) {
                    return config_err("metamorphome models share allomorph indices across cells and need equal inventories");
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChangeRecord {
    pub cycle: u64,
    /// Position of the focal lexeme in the lexicon after the step (tidying-up
    /// can shift it down).
    pub focal_lexeme: usize,
    pub focal_cell: usize,
    pub old_exponent: ExponentId,
    pub new_exponent: ExponentId,
    pub changed: bool,
    pub lexemes_deleted: usize,
}

/// Vote accumulator over the exponents of one cell.
#[derive(Default)]
struct Tally {
    matches: Vec<u32>,
    contrasts: Vec<u32>,
    touched: Vec<u16>,
    ties: Vec<u16>,
}

impl Tally {
    fn reset(&mut self, size: usize) {
        for &v in &self.touched {
            self.matches[v as usize] = 0;
            self.contrasts[v as usize] = 0;
        }
        self.touched.clear();
        if self.matches.len() < size {
            self.matches.resize(size, 0);
            self.contrasts.resize(size, 0);
        }
    }

    #[inline]
    fn vote(&mut self, value: ExponentId, matching: bool) {
        let i = value.index();
        if self.matches[i] == 0 && self.contrasts[i] == 0 {
            self.touched.push(value.0);
        }
        if matching {
            self.matches[i] += 1;
        } else {
            self.contrasts[i] += 1;
        }
    }

    /// Highest-scoring candidate, ties broken uniformly. With `alpha = 0`
    /// contrasting votes carry no weight and do not nominate candidates.
    fn winner<R: Rng + ?Sized>(&mut self, alpha: f64, rng: &mut R) -> Option<ExponentId> {
        self.ties.clear();
        let mut best = f64::NEG_INFINITY;
        for &v in &self.touched {
            let (m, c) = (self.matches[v as usize], self.contrasts[v as usize]);
            if m == 0 && alpha == 0.0 {
                continue;
            }
            let score = m as f64 - alpha * c as f64;
            let tol = 1e-9 * (1.0 + score.abs());
            if score > best + tol {
                best = score;
                self.ties.clear();
                self.ties.push(v);
            } else if (score - best).abs() <= tol {
                self.ties.push(v);
            }
        }
        match self.ties.len() {
            0 => None,
            1 => Some(ExponentId(self.ties[0])),
            n => {
                self.ties.sort_unstable();
                Some(ExponentId(self.ties[rng.random_range(0..n)]))
            }
        }
    }
}

/// Reusable step driver: holds the resolved frequency weights and scratch
/// buffers for one run.
pub struct CellFiller {
    cfg: StepConfig,
    lexeme_weights: Option<Vec<f64>>,
    cell_weights: Option<Vec<f64>>,
    pivots: Vec<usize>,
    evidence: Vec<usize>,
    tally: Tally,
}

impl CellFiller {
    pub fn new(cfg: &StepConfig, lexicon: &Lexicon) -> Result<Self> {
        cfg.validate(lexicon.num_lexemes(), lexicon.num_cells(), lexicon.inventory_sizes())?;
        Ok(CellFiller {
            cfg: cfg.clone(),
            lexeme_weights: cfg.plan.lexeme_zipf.item_weights(lexicon.num_lexemes())?,
            cell_weights: cfg.plan.cell_zipf.item_weights(lexicon.num_cells())?,
            pivots: Vec::new(),
            evidence: Vec::new(),
            tally: Tally::default(),
        })
    }

    pub fn config(&self) -> &StepConfig {
        &self.cfg
    }

    /// Runs whichever strategy the configuration selects.
    pub fn step<R: Rng + ?Sized>(&mut self, lexicon: &mut Lexicon, cycle: u64, rng: &mut R) -> ChangeRecord {
        match (self.cfg.orientation, self.cfg.esher_mode) {
            (Orientation::Rhizomorphome, _) => self.rhizo(lexicon, cycle, rng),
            (Orientation::Metamorphome, true) => esher_step_at(lexicon, cycle, rng),
            (Orientation::Metamorphome, false) => self.meta(lexicon, cycle, rng),
        }
    }

    fn rhizo<R: Rng + ?Sized>(&mut self, lex: &mut Lexicon, cycle: u64, rng: &mut R) -> ChangeRecord {
        let lexemes = lex.num_lexemes();
        let cells = lex.num_cells();
        let lw = self.lexeme_weights.as_deref();
        let cw = self.cell_weights.as_deref();
        let plan = &self.cfg.plan;

        let focal = draw_focus(lexemes, lw, rng);
        let cell = draw_focus(cells, cw, rng);
        draw_excluding(cells, cell, plan.num_pivots, cw, rng, &mut self.pivots);

        let m = plan.evidence_count(lexemes - 1);
        if !plan.per_pivot_resample {
            draw_excluding(lexemes, focal, m, lw, rng, &mut self.evidence);
        }
        self.tally.reset(lex.inventory_sizes()[cell] as usize);
        for &pivot in &self.pivots {
            if plan.per_pivot_resample {
                draw_excluding(lexemes, focal, m, lw, rng, &mut self.evidence);
            }
            let focal_pivot = lex.get(focal, pivot);
            for &e in &self.evidence {
                self.tally.vote(lex.get(e, cell), lex.get(e, pivot) == focal_pivot);
            }
        }

        let old = lex.get(focal, cell);
        let new = self.tally.winner(self.cfg.alpha, rng).unwrap_or(old);
        lex.set(focal, cell, new);
        let (deleted, focal_after) = if self.cfg.tidy_up {
            remove_duplicates_of(lex, focal)
        } else {
            (0, focal)
        };
        ChangeRecord {
            cycle,
            focal_lexeme: focal_after,
            focal_cell: cell,
            old_exponent: old,
            new_exponent: new,
            changed: old != new,
            lexemes_deleted: deleted,
        }
    }

    fn meta<R: Rng + ?Sized>(&mut self, lex: &mut Lexicon, cycle: u64, rng: &mut R) -> ChangeRecord {
        let lexemes = lex.num_lexemes();
        let cells = lex.num_cells();
        let lw = self.lexeme_weights.as_deref();
        let cw = self.cell_weights.as_deref();
        let plan = &self.cfg.plan;

        let focal = draw_focus(lexemes, lw, rng);
        let cell = draw_focus(cells, cw, rng);
        draw_excluding(lexemes, focal, plan.num_pivots, lw, rng, &mut self.pivots);

        let m = plan.evidence_count(cells - 1);
        if !plan.per_pivot_resample {
            draw_excluding(cells, cell, m, cw, rng, &mut self.evidence);
        }
        self.tally.reset(lex.max_inventory());
        for &pivot in &self.pivots {
            if plan.per_pivot_resample {
                draw_excluding(cells, cell, m, cw, rng, &mut self.evidence);
            }
            let pivot_focal = lex.get(pivot, cell);
            for &e in &self.evidence {
                // Identity between evidence cell and focal cell within the pivot
                // lexeme votes for copying the focal lexeme's own index at E.
                self.tally.vote(lex.get(focal, e), lex.get(pivot, e) == pivot_focal);
            }
        }

        let old = lex.get(focal, cell);
        let new = self.tally.winner(self.cfg.alpha, rng).unwrap_or(old);
        lex.set(focal, cell, new);
        ChangeRecord {
            cycle,
            focal_lexeme: focal,
            focal_cell: cell,
            old_exponent: old,
            new_exponent: new,
            changed: old != new,
            lexemes_deleted: 0,
        }
    }
}

/// One rhizomorphome step (associative votes, plus dissociative votes when
/// `alpha > 0`).
pub fn rhizo_step<R: Rng + ?Sized>(lexicon: &mut Lexicon, cfg: &StepConfig, rng: &mut R) -> Result<ChangeRecord> {
    if cfg.orientation != Orientation::Rhizomorphome {
        return config_err("rhizo_step requires orientation = rhizomorphome");
    }
    Ok(CellFiller::new(cfg, lexicon)?.rhizo(lexicon, 0, rng))
}

/// One metamorphome step with pivot lexemes and evidence cells.
pub fn meta_step<R: Rng + ?Sized>(lexicon: &mut Lexicon, cfg: &StepConfig, rng: &mut R) -> Result<ChangeRecord> {
    if cfg.orientation != Orientation::Metamorphome || cfg.esher_mode {
        return config_err("meta_step requires orientation = metamorphome and esher_mode = false");
    }
    Ok(CellFiller::new(cfg, lexicon)?.meta(lexicon, 0, rng))
}

/// One step of the original metamorphome model: a single evidence lexeme
/// decides between copying the pivot index and a random index from the
/// focal lexeme's other cells.
pub fn esher_step<R: Rng + ?Sized>(lexicon: &mut Lexicon, rng: &mut R) -> Result<ChangeRecord> {
    if lexicon.num_lexemes() < 2 || lexicon.num_cells() < 2 {
        return config_err("esher_step needs at least two lexemes and two cells");
    }
    if lexicon.inventory_sizes().windows(2).any(|w| w[0] != w[1]) {
        return config_err("metamorphome models need equal inventories");
    }
    Ok(esher_step_at(lexicon, 0, rng))
}

fn esher_step_at<R: Rng + ?Sized>(lex: &mut Lexicon, cycle: u64, rng: &mut R) -> ChangeRecord {
    let lexemes = lex.num_lexemes();
    let cells = lex.num_cells();
    let focal = rng.random_range(0..lexemes);
    let cell = rng.random_range(0..cells);
    let mut pivot = rng.random_range(0..cells - 1);
    if pivot >= cell {
        pivot += 1;
    }
    let mut witness = rng.random_range(0..lexemes - 1);
    if witness >= focal {
        witness += 1;
    }

    let old = lex.get(focal, cell);
    let new = if lex.get(witness, pivot) == lex.get(witness, cell) {
        lex.get(focal, pivot)
    } else {
        let mut present: Vec<ExponentId> = (0..cells)
            .filter(|&c| c != cell)
            .map(|c| lex.get(focal, c))
            .collect();
        present.sort_unstable();
        present.dedup();
        present[rng.random_range(0..present.len())]
    };
    lex.set(focal, cell, new);
    ChangeRecord {
        cycle,
        focal_lexeme: focal,
        focal_cell: cell,
        old_exponent: old,
        new_exponent: new,
        changed: old != new,
        lexemes_deleted: 0,
    }
}

/// Deletes every other lexeme whose row equals the focal lexeme's row.
/// Returns the number deleted.
pub fn tidy_up(lexicon: &mut Lexicon, focal_lexeme: usize) -> usize {
    remove_duplicates_of(lexicon, focal_lexeme).0
}

fn remove_duplicates_of(lex: &mut Lexicon, focal: usize) -> (usize, usize) {
    let target: Vec<ExponentId> = lex.row(focal).to_vec();
    let doomed: Vec<bool> = (0..lex.num_lexemes())
        .map(|l| l != focal && lex.row(l) == target.as_slice())
        .collect();
    let deleted = doomed.iter().filter(|&&d| d).count();
    if deleted == 0 {
        return (0, focal);
    }
    let before = doomed[..focal].iter().filter(|&&d| d).count();
    lex.remove_lexemes_where(|l| doomed[l]);
    (deleted, focal - before)
}
