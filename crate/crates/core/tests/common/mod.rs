//! Invariant checks shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use morphoevo_core::cellfill::{CellFiller, Orientation, StepConfig};
use morphoevo_core::lexicon::{init_random_lexicon, ClassSignature, ExponentId, Lexicon};
use morphoevo_core::metrics::{cell_entropy, class_turnover, conditional_entropy, theils_u};
use morphoevo_core::runner::{output, run_simulation, LexiconSpec, SimulationConfig};
use morphoevo_core::sampling::{run_rng, SamplePlan};

pub type Check = Result<(), String>;

const EPS: f64 = 1e-9;

pub fn random_lexicon(seed: u64, lexemes: usize, cells: usize, exponents: u16) -> Lexicon {
    init_random_lexicon(lexemes, cells, &vec![exponents; cells], &mut run_rng(seed, 0)).unwrap()
}

pub fn rhizo(num_pivots: usize, evidence_fraction: f64, alpha: f64, tidy_up: bool) -> StepConfig {
    StepConfig {
        alpha,
        plan: SamplePlan {
            evidence_fraction,
            num_pivots,
            ..SamplePlan::default()
        },
        tidy_up,
        ..StepConfig::default()
    }
}

pub fn meta(num_pivots: usize, evidence_fraction: f64, alpha: f64) -> StepConfig {
    StepConfig {
        orientation: Orientation::Metamorphome,
        ..rhizo(num_pivots, evidence_fraction, alpha, false)
    }
}

pub fn esher() -> StepConfig {
    StepConfig {
        orientation: Orientation::Metamorphome,
        esher_mode: true,
        ..StepConfig::default()
    }
}

/// `0 <= H(X|Y) <= H(X) <= log2(|inventory of X|)` and `U(X|Y)` in [0, 1]
/// for every ordered pair of distinct cells.
pub fn entropy_bounds(lex: &Lexicon) -> Check {
    for x in 0..lex.num_cells() {
        let hx = cell_entropy(lex, x).unwrap();
        let cap = f64::from(lex.inventory_sizes()[x]).log2();
        if !(-EPS..=cap + EPS).contains(&hx) {
            return Err(format!("H({x}) = {hx} outside [0, {cap}]"));
        }
        for y in (0..lex.num_cells()).filter(|&y| y != x) {
            let h = conditional_entropy(lex, x, y).unwrap();
            if h < -EPS || h > hx + EPS {
                return Err(format!("H({x}|{y}) = {h} outside [0, H({x}) = {hx}]"));
            }
            let u = theils_u(lex, x, y).unwrap();
            if !(0.0..=1.0).contains(&u) {
                return Err(format!("U({x}|{y}) = {u} outside [0, 1]"));
            }
        }
    }
    Ok(())
}

fn observed(lex: &Lexicon) -> Vec<BTreeSet<ExponentId>> {
    (0..lex.num_cells())
        .map(|c| lex.cell_inventory_observed(c).unwrap())
        .collect()
}

fn row_sets(lex: &Lexicon) -> Vec<BTreeSet<ExponentId>> {
    lex.rows().map(|r| r.iter().copied().collect()).collect()
}

/// With `alpha = 0` no cell ever gains an exponent it did not already show.
/// The metamorphome analogue: no lexeme gains an index it did not already use.
pub fn monotone_inventories(seed: u64, cfg: &StepConfig, steps: u64) -> Check {
    let mut rng = run_rng(seed, 1);
    let mut lex = random_lexicon(seed, 30, 5, 4);
    let mut filler = CellFiller::new(cfg, &lex).unwrap();
    let inventories = if cfg.orientation == Orientation::Metamorphome {
        row_sets
    } else {
        observed
    };
    let mut before = inventories(&lex);
    for cycle in 1..=steps {
        filler.step(&mut lex, cycle, &mut rng);
        let after = inventories(&lex);
        for (i, (b, a)) in before.iter().zip(&after).enumerate() {
            if !a.is_subset(b) {
                return Err(format!("inventory {i} gained exponents at cycle {cycle}: {b:?} -> {a:?}"));
            }
        }
        before = after;
    }
    Ok(())
}

/// A lexicon with a single class stays that way under any strategy.
pub fn uniform_is_absorbing(seed: u64, cfg: &StepConfig, steps: u64) -> Check {
    let rows: Vec<Vec<u16>> = (0..12).map(|_| vec![2, 0, 1, 2]).collect();
    let row_constant: Vec<Vec<u16>> = (0..12).map(|_| vec![1; 4]).collect();
    let rows = if cfg.orientation == Orientation::Metamorphome {
        row_constant
    } else {
        rows
    };
    let mut lex = Lexicon::from_rows(&[3; 4], &rows).unwrap();
    let start = lex.clone();
    let mut filler = CellFiller::new(cfg, &lex).unwrap();
    let mut rng = run_rng(seed, 2);
    for cycle in 1..=steps {
        let rec = filler.step(&mut lex, cycle, &mut rng);
        if rec.changed || lex.distinct_classes().len() != 1 {
            return Err(format!("uniform lexicon changed at cycle {cycle}: {rec:?}"));
        }
    }
    if cfg.tidy_up {
        // Tidying collapses the duplicates but never the class.
        return (lex.distinct_classes() == start.distinct_classes())
            .then_some(())
            .ok_or_else(|| "class set changed".into());
    }
    (lex == start).then_some(()).ok_or_else(|| "grid changed".into())
}

/// With tidying-up the number of classes never grows.
pub fn tidy_never_adds_classes(seed: u64, cfg: &StepConfig, steps: u64) -> Check {
    let mut rng = run_rng(seed, 3);
    let mut lex = random_lexicon(seed, 40, 4, 3);
    lex.remove_duplicate_rows();
    let mut filler = CellFiller::new(cfg, &lex).unwrap();
    let mut classes = lex.distinct_classes().len();
    for cycle in 1..=steps {
        filler.step(&mut lex, cycle, &mut rng);
        let now = lex.distinct_classes().len();
        if now > classes {
            return Err(format!("classes rose {classes} -> {now} at cycle {cycle}"));
        }
        classes = now;
    }
    Ok(())
}

/// Identity, symmetry, the set-difference formula and the triangle
/// inequality for class turnover.
pub fn turnover_axioms(a: &BTreeSet<ClassSignature>, b: &BTreeSet<ClassSignature>, c: &BTreeSet<ClassSignature>) -> Check {
    let ab = class_turnover(a, b);
    if class_turnover(a, a) != 0 {
        return Err("turnover(S, S) != 0".into());
    }
    if ab != class_turnover(b, a) {
        return Err("turnover not symmetric".into());
    }
    let union = a.union(b).count();
    let inter = a.intersection(b).count();
    if ab != union - inter {
        return Err(format!("turnover {ab} != |union| - |intersection| = {}", union - inter));
    }
    if class_turnover(a, c) > ab + class_turnover(b, c) {
        return Err("triangle inequality violated".into());
    }
    Ok(())
}

/// Two runs of the same config and run id write byte-identical CSV.
pub fn seed_determinism(cfg: &SimulationConfig, run_id: u64) -> Check {
    let a = run_simulation(cfg, run_id).unwrap();
    let b = run_simulation(cfg, run_id).unwrap();
    let csv_a = output::metrics_csv(std::slice::from_ref(&a));
    let csv_b = output::metrics_csv(std::slice::from_ref(&b));
    if csv_a != csv_b {
        return Err("metrics CSV differs between identical runs".into());
    }
    if a.snapshots != b.snapshots {
        return Err("snapshots differ between identical runs".into());
    }
    Ok(())
}

pub fn small_config(step: StepConfig, seed: u64) -> SimulationConfig {
    SimulationConfig {
        lexicon: LexiconSpec::uniform(25, 5, 3),
        step,
        total_cycles: 600,
        halting: morphoevo_core::runner::Halting::FixedCycles,
        metric_interval: Some(7),
        snapshot_count: 5,
        runs: 1,
        master_seed: seed,
    }
    .resolve()
    .unwrap()
}

/// Zone blocks are disjoint, cover every cell, and cells share a block
/// exactly when their columns are identical.
pub fn zone_partition_is_equivalence(lex: &Lexicon) -> Check {
    let zones = lex.zone_partition();
    let mut block_of = vec![usize::MAX; lex.num_cells()];
    for (b, zone) in zones.iter().enumerate() {
        for &cell in zone {
            if block_of[cell] != usize::MAX {
                return Err(format!("cell {cell} in two blocks"));
            }
            block_of[cell] = b;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err("some cell is in no block".into());
    }
    let same = |i: usize, j: usize| lex.rows().all(|r| r[i] == r[j]);
    for i in 0..lex.num_cells() {
        for j in 0..lex.num_cells() {
            if same(i, j) != (block_of[i] == block_of[j]) {
                return Err(format!("cells {i},{j}: column identity disagrees with blocks"));
            }
        }
    }
    Ok(())
}

/// Exponents of cell `c` that occur most often among the other lexemes
/// sharing the focal lexeme's exponent in cell `p`.
pub fn modal_among_matches(lex: &Lexicon, focal: usize, c: usize, p: usize) -> BTreeSet<ExponentId> {
    let mut counts: BTreeMap<ExponentId, usize> = BTreeMap::new();
    for l in (0..lex.num_lexemes()).filter(|&l| l != focal) {
        if lex.get(l, p) == lex.get(focal, p) {
            *counts.entry(lex.get(l, c)).or_default() += 1;
        }
    }
    let best = counts.values().copied().max().unwrap_or(0);
    counts.into_iter().filter(|&(_, n)| n == best).map(|(e, _)| e).collect()
}

/// One associative-only step with a single pivot and full evidence picks a
/// most frequent exponent among the matching lexemes (or keeps the
/// incumbent when nothing matches). Micro-instances have distinct rows so the
/// focal lexeme can be located again after tidying.
pub fn am_step_matches_mode_oracle(seed: u64) -> Check {
    let mut rng = run_rng(seed, 4);
    let cells = 2 + (seed % 3) as usize;
    let lexemes = 3 + (seed % 6) as usize;
    let exponents = 2 + (seed % 3) as u16;
    let mut lex = random_lexicon(seed, lexemes, cells, exponents);
    let mut seen = BTreeSet::new();
    lex = {
        let rows: Vec<Vec<u16>> = lex
            .rows()
            .filter(|r| seen.insert(r.to_vec()))
            .map(|r| r.iter().map(|e| e.0).collect())
            .collect();
        Lexicon::from_rows(&vec![exponents; cells], &rows).unwrap()
    };
    let before = lex.clone();
    let cfg = rhizo(1, 1.0, 0.0, true);
    let mut filler = CellFiller::new(&cfg, &lex).unwrap();
    let rec = filler.step(&mut lex, 1, &mut rng);
    let c = rec.focal_cell;
    let new_row = lex.row(rec.focal_lexeme);
    let focal = (0..before.num_lexemes())
        .find(|&l| {
            let row = before.row(l);
            row[c] == rec.old_exponent
                && (0..cells).all(|j| j == c || row[j] == new_row[j])
        })
        .ok_or("focal lexeme not found")?;
    let explained = (0..cells).filter(|&p| p != c).any(|p| {
        let modal = modal_among_matches(&before, focal, c, p);
        if modal.is_empty() {
            rec.new_exponent == rec.old_exponent
        } else {
            modal.contains(&rec.new_exponent)
        }
    });
    if !explained {
        return Err(format!("seed {seed}: {rec:?} is not a modal matching exponent for any pivot"));
    }
    if cells == 2 {
        let modal = modal_among_matches(&before, focal, c, 1 - c);
        let expected_ok = if modal.is_empty() {
            rec.new_exponent == rec.old_exponent
        } else {
            modal.contains(&rec.new_exponent)
        };
        if !expected_ok {
            return Err(format!("seed {seed}: forced pivot, {rec:?} not in {modal:?}"));
        }
    }
    let duplicates = lex.rows().filter(|r| *r == new_row).count();
    if duplicates != 1 {
        return Err(format!("seed {seed}: {duplicates} copies of the focal row after tidying"));
    }
    Ok(())
}
