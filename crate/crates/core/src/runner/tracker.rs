//! Incremental bookkeeping of inflection classes during a run.

use std::collections::HashMap;

use crate::cellfill::ChangeRecord;
use crate::lexicon::{ExponentId, Lexicon};

/// Follows class membership across steps without rescanning the lexicon, and
/// logs every cycle at which a class appears or disappears.
pub struct ClassTracker {
    ids: HashMap<Vec<ExponentId>, u32>,
    counts: Vec<usize>,
    live: usize,
    /// `(cycle, class)`: the class toggled between present and absent.
    events: Vec<(u64, u32)>,
    scratch: Vec<ExponentId>,
    toggles: HashMap<u32, u32>,
}

impl ClassTracker {
    pub fn new(lexicon: &Lexicon) -> Self {
        let mut t = ClassTracker {
            ids: HashMap::new(),
            counts: Vec::new(),
            live: 0,
            events: Vec::new(),
            scratch: Vec::new(),
            toggles: HashMap::new(),
        };
        for row in lexicon.rows() {
            let id = t.intern(row);
            t.counts[id as usize] += 1;
        }
        t.live = t.counts.iter().filter(|&&c| c > 0).count();
        t
    }

    fn intern(&mut self, row: &[ExponentId]) -> u32 {
        if let Some(&id) = self.ids.get(row) {
            return id;
        }
        let id = self.counts.len() as u32;
        self.ids.insert(row.to_vec(), id);
        self.counts.push(0);
        id
    }

    fn adjust(&mut self, id: u32, delta: isize, cycle: u64) {
        let count = &mut self.counts[id as usize];
        let before = *count;
        *count = (before as isize + delta) as usize;
        match (before, *count) {
            (0, c) if c > 0 => {
                self.live += 1;
                self.events.push((cycle, id));
            }
            (b, 0) if b > 0 => {
                self.live -= 1;
                self.events.push((cycle, id));
            }
            _ => {}
        }
    }

    /// Applies one step. `lexicon` is the state after the step. Returns the
    /// size of the focal lexeme's class after the step.
    pub fn apply(&mut self, lexicon: &Lexicon, rec: &ChangeRecord) -> usize {
        let new_row = lexicon.row(rec.focal_lexeme);
        let new_id = self.intern(new_row);
        if rec.changed {
            self.scratch.clear();
            self.scratch.extend_from_slice(new_row);
            self.scratch[rec.focal_cell] = rec.old_exponent;
            let old_row = std::mem::take(&mut self.scratch);
            let old_id = self.intern(&old_row);
            self.scratch = old_row;
            self.adjust(old_id, -1, rec.cycle);
            self.adjust(new_id, 1, rec.cycle);
        }
        if rec.lexemes_deleted > 0 {
            self.adjust(new_id, -(rec.lexemes_deleted as isize), rec.cycle);
        }
        self.counts[new_id as usize]
    }

    pub fn class_count(&self) -> usize {
        self.live
    }

    /// Classes present at exactly one of the cycles `at - gap` and `at`.
    /// `None` when `at < gap`.
    pub fn turnover(&mut self, at: u64, gap: u64) -> Option<usize> {
        if at < gap {
            return None;
        }
        let from = at - gap;
        let start = self.events.partition_point(|&(c, _)| c <= from);
        let end = self.events.partition_point(|&(c, _)| c <= at);
        self.toggles.clear();
        for &(_, id) in &self.events[start..end] {
            *self.toggles.entry(id).or_insert(0) += 1;
        }
        Some(self.toggles.values().filter(|&&n| n % 2 == 1).count())
    }
}
