//! The lexicon: a lexemes × cells grid of exponent indices.
//!
//! Exponents are plain indices scoped to their cell. Exponent 2 of cell 1
//! and exponent 2 of cell 5 are unrelated in the inflection-class reading;
//! in the metamorphome reading the same grid holds allomorph indices that
//! are compared within a lexeme.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct ExponentId(pub u16);

impl ExponentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ExponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A full row of the grid; two lexemes are in the same inflection class iff
/// their signatures are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSignature(pub Vec<ExponentId>);

impl ClassSignature {
    pub fn from_indices(indices: &[u16]) -> Self {
        ClassSignature(indices.iter().copied().map(ExponentId).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    num_cells: usize,
    inventory_sizes: Vec<u16>,
    grid: Vec<ExponentId>,
}

impl Lexicon {
    /// Builds a lexicon from explicit rows, checking every entry against its
    /// cell's inventory.
    pub fn from_rows(inventory_sizes: &[u16], rows: &[Vec<u16>]) -> Result<Self> {
        check_dims(rows.len(), inventory_sizes.len(), inventory_sizes)?;
        let num_cells = inventory_sizes.len();
        let mut grid = Vec::with_capacity(rows.len() * num_cells);
        for (l, row) in rows.iter().enumerate() {
            if row.len() != num_cells {
                return config_err(format!(
                    "row {l} has {} entries, expected {num_cells}",
                    row.len()
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= inventory_sizes[c] {
                    return config_err(format!(
                        "row {l} cell {c}: exponent {v} outside inventory of size {}",
                        inventory_sizes[c]
                    ));
                }
                grid.push(ExponentId(v));
            }
        }
        Ok(Lexicon {
            num_cells,
            inventory_sizes: inventory_sizes.to_vec(),
            grid,
        })
    }

    /// Like [`Lexicon::from_rows`] with every cell sized to fit the largest
    /// index observed in it.
    pub fn from_rows_inferred(rows: &[Vec<u16>]) -> Result<Self> {
        let num_cells = rows.first().map_or(0, Vec::len);
        let mut sizes = vec![1u16; num_cells];
        for row in rows {
            for (c, &v) in row.iter().enumerate().take(num_cells) {
                sizes[c] = sizes[c].max(v.saturating_add(1));
            }
        }
        Self::from_rows(&sizes, rows)
    }

    #[inline]
    pub fn num_lexemes(&self) -> usize {
        self.grid.len() / self.num_cells
    }

    #[inline]
    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn inventory_sizes(&self) -> &[u16] {
        &self.inventory_sizes
    }

    pub fn max_inventory(&self) -> usize {
        self.inventory_sizes.iter().copied().max().unwrap_or(0) as usize
    }

    #[inline]
    pub fn get(&self, lexeme: usize, cell: usize) -> ExponentId {
        self.grid[lexeme * self.num_cells + cell]
    }

    /// Writes an exponent into a cell. Panics if the exponent is outside the
    /// cell's inventory.
    #[inline]
    pub fn set(&mut self, lexeme: usize, cell: usize, value: ExponentId) {
        assert!(
            value.0 < self.inventory_sizes[cell],
            "exponent {value} outside inventory of cell {cell}"
        );
        self.grid[lexeme * self.num_cells + cell] = value;
    }

    #[inline]
    pub fn row(&self, lexeme: usize) -> &[ExponentId] {
        let start = lexeme * self.num_cells;
        &self.grid[start..start + self.num_cells]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExponentId]> + '_ {
        self.grid.chunks_exact(self.num_cells)
    }

    pub fn column(&self, cell: usize) -> impl Iterator<Item = ExponentId> + '_ {
        self.grid.iter().skip(cell).step_by(self.num_cells).copied()
    }

    pub fn signature(&self, lexeme: usize) -> ClassSignature {
        ClassSignature(self.row(lexeme).to_vec())
    }

    pub(crate) fn remove_lexemes_where(&mut self, mut doomed: impl FnMut(usize) -> bool) {
        let c = self.num_cells;
        let mut write = 0;
        for read in 0..self.num_lexemes() {
            if doomed(read) {
                continue;
            }
            if write != read {
                self.grid.copy_within(read * c..(read + 1) * c, write * c);
            }
            write += 1;
        }
        self.grid.truncate(write * c);
    }

    /// Keeps the first lexeme of every class and drops the rest. Returns the
    /// number removed.
    pub fn remove_duplicate_rows(&mut self) -> usize {
        let mut seen: HashSet<Vec<ExponentId>> = HashSet::new();
        let doomed: Vec<bool> = self.rows().map(|r| !seen.insert(r.to_vec())).collect();
        let removed = doomed.iter().filter(|&&d| d).count();
        self.remove_lexemes_where(|l| doomed[l]);
        removed
    }

    pub fn distinct_classes(&self) -> BTreeSet<ClassSignature> {
        self.rows().map(|r| ClassSignature(r.to_vec())).collect()
    }

    /// Number of lexemes in each class, keyed by signature.
    pub fn class_sizes(&self) -> HashMap<&[ExponentId], usize> {
        let mut sizes = HashMap::new();
        for row in self.rows() {
            *sizes.entry(row).or_insert(0) += 1;
        }
        sizes
    }

    pub fn cell_inventory_observed(&self, cell: usize) -> Result<BTreeSet<ExponentId>> {
        if cell >= self.num_cells {
            return Err(Error::OutOfRange {
                what: "cell",
                index: cell,
                size: self.num_cells,
            });
        }
        Ok(self.column(cell).collect())
    }

    /// Morphomic zones: cells that hold the same index as each other in every
    /// lexeme. Blocks are listed in order of their smallest cell.
    pub fn zone_partition(&self) -> Vec<Vec<usize>> {
        let mut zones: Vec<Vec<usize>> = Vec::new();
        'cells: for cell in 0..self.num_cells {
            for zone in &mut zones {
                let rep = zone[0];
                if self.rows().all(|r| r[rep] == r[cell]) {
                    zone.push(cell);
                    continue 'cells;
                }
            }
            zones.push(vec![cell]);
        }
        zones
    }

    pub fn zone_count(&self) -> usize {
        self.zone_partition().len()
    }

    /// True when no exponent occurs in two different classes, in any cell.
    /// Such a lexicon is a fixed point of the associative-only dynamics:
    /// every match through a pivot comes from the focal lexeme's own class.
    pub fn is_partitioned(&self) -> bool {
        let mut class_of: HashMap<&[ExponentId], usize> = HashMap::new();
        let ids: Vec<usize> = self
            .rows()
            .map(|r| {
                let next = class_of.len();
                *class_of.entry(r).or_insert(next)
            })
            .collect();
        let mut owner: Vec<Option<usize>> = Vec::new();
        for cell in 0..self.num_cells {
            owner.clear();
            owner.resize(self.inventory_sizes[cell] as usize, None);
            for (lexeme, &id) in ids.iter().enumerate() {
                let slot = &mut owner[self.get(lexeme, cell).index()];
                match *slot {
                    Some(other) if other != id => return false,
                    _ => *slot = Some(id),
                }
            }
        }
        true
    }

    /// Snapshot CSV: header `cell_0,...,cell_{C-1}`, one row per lexeme.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.grid.len() * 3 + 16 * self.num_cells);
        for c in 0..self.num_cells {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "cell_{c}");
        }
        out.push('\n');
        for row in self.rows() {
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses a snapshot CSV. Inventory sizes are inferred from the data.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Csv("empty input".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        for (c, name) in cols.iter().enumerate() {
            if *name != format!("cell_{c}") {
                return Err(Error::Csv(format!("unexpected header column {name:?}")));
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|f| f.trim().parse::<u16>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Csv(format!("row {i}: {e}")))?;
            if row.len() != cols.len() {
                return Err(Error::Csv(format!(
                    "row {i} has {} fields, header has {}",
                    row.len(),
                    cols.len()
                )));
            }
            rows.push(row);
        }
        Self::from_rows_inferred(&rows).map_err(|e| Error::Csv(e.to_string()))
    }
}

fn check_dims(num_lexemes: usize, num_cells: usize, inventory_sizes: &[u16]) -> Result<()> {
    if num_lexemes == 0 {
        return config_err("num_lexemes must be at least 1");
    }
    if num_cells < 2 {
        return config_err("num_cells must be at least 2");
    }
    if inventory_sizes.len() != num_cells {
        return config_err(format!(
            "{} inventory sizes given for {num_cells} cells",
            inventory_sizes.len()
        ));
    }
    if inventory_sizes.contains(&0) {
        return config_err("every cell needs at least one exponent");
    }
    Ok(())
}

/// Fills every cell independently and uniformly from its inventory.
pub fn init_random_lexicon<R: Rng + ?Sized>(
    num_lexemes: usize,
    num_cells: usize,
    inventory_sizes: &[u16],
    rng: &mut R,
) -> Result<Lexicon> {
    check_dims(num_lexemes, num_cells, inventory_sizes)?;
    let mut grid = Vec::with_capacity(num_lexemes * num_cells);
    for _ in 0..num_lexemes {
        for &size in inventory_sizes {
            grid.push(ExponentId(rng.random_range(0..size)));
        }
    }
    Ok(Lexicon {
        num_cells,
        inventory_sizes: inventory_sizes.to_vec(),
        grid,
    })
}
