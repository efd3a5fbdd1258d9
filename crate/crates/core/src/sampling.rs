//! Seeded random primitives: Zipf weights, weighted sampling without
//! replacement and inverse-frequency focus selection.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

/// The random stream every simulation component draws from.
pub type SimRng = ChaCha8Rng;

/// Stream for one run of a batch. The master seed keys the ChaCha state and
/// the run id selects an independent stream, so a run's draws do not depend
/// on which runs execute before it or on which thread.
pub fn run_rng(master_seed: u64, run_id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run_id);
    rng
}

/// Frequency skew over a set of items (lexemes or cells).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZipfSpec {
    pub enabled: bool,
    pub s: f64,
    /// `None` binds rank 1 to item 0, rank 2 to item 1, and so on. `Some`
    /// shuffles the binding with this seed.
    pub rank_permutation_seed: Option<u64>,
}

impl Default for ZipfSpec {
    fn default() -> Self {
        ZipfSpec {
            enabled: false,
            s: 1.0,
            rank_permutation_seed: None,
        }
    }
}

impl ZipfSpec {
    pub fn zipf(s: f64) -> Self {
        ZipfSpec {
            enabled: true,
            s,
            rank_permutation_seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled && !(self.s > 0.0 && self.s.is_finite()) {
            return config_err(format!("zipf exponent must be positive, got {}", self.s));
        }
        Ok(())
    }

    /// `rank_assignment[item]` is the item's 0-based frequency rank.
    pub fn rank_assignment(&self, n: usize) -> Vec<usize> {
        let mut ranks: Vec<usize> = (0..n).collect();
        if let Some(seed) = self.rank_permutation_seed {
            ranks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        ranks
    }

    /// Per-item frequency weights (normalized), or `None` when disabled.
    pub fn item_weights(&self, n: usize) -> Result<Option<Vec<f64>>> {
        if !self.enabled {
            return Ok(None);
        }
        self.validate()?;
        let by_rank = zipf_weights(n, self.s)?;
        Ok(Some(
            self.rank_assignment(n)
                .into_iter()
                .map(|rank| by_rank[rank])
                .collect(),
        ))
    }
}

/// Evidence knobs of one cell-filling step.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub evidence_fraction: f64,
    pub num_pivots: usize,
    pub lexeme_zipf: ZipfSpec,
    pub cell_zipf: ZipfSpec,
    pub per_pivot_resample: bool,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            evidence_fraction: 1.0,
            num_pivots: 1,
            lexeme_zipf: ZipfSpec::default(),
            cell_zipf: ZipfSpec::default(),
            per_pivot_resample: true,
        }
    }
}

impl SamplePlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.evidence_fraction > 0.0 && self.evidence_fraction <= 1.0) {
            return config_err(format!(
                "evidence_fraction must lie in (0, 1], got {}",
                self.evidence_fraction
            ));
        }
        if self.num_pivots == 0 {
            return config_err("num_pivots must be at least 1");
        }
        self.lexeme_zipf.validate()?;
        self.cell_zipf.validate()
    }

    /// Evidence items drawn out of `available` non-focal items.
    pub fn evidence_count(&self, available: usize) -> usize {
        evidence_count(self.evidence_fraction, available)
    }
}

/// `ceil(fraction * available)`, robust to representation error such as
/// `6.0/7.0 * 7.0 = 6.000000000000001`.
pub fn evidence_count(fraction: f64, available: usize) -> usize {
    let raw = fraction * available as f64;
    let count = (raw - 1e-9).ceil().max(0.0) as usize;
    count.min(available)
}

/// Weights proportional to `rank^-s` for ranks `1..=n`, normalized.
pub fn zipf_weights(n: usize, s: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return config_err("zipf_weights needs at least one item");
    }
    if !(s > 0.0 && s.is_finite()) {
        return config_err(format!("zipf exponent must be positive, got {s}"));
    }
    let raw: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-s)).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// Draws `m` distinct indices by repeated weighted draws, removing each pick
/// before the next draw.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    weights: &[f64],
    m: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if m > weights.len() {
        return config_err(format!(
            "cannot draw {m} items from {} without replacement",
            weights.len()
        ));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return config_err(format!("sampling weights must be positive, got {w}"));
    }
    let mut pool: Vec<(usize, f64)> = weights.iter().copied().enumerate().collect();
    Ok(draw_weighted(&mut pool, m, rng))
}

fn draw_weighted<R: Rng + ?Sized>(pool: &mut Vec<(usize, f64)>, m: usize, rng: &mut R) -> Vec<usize> {
    let mut out = Vec::with_capacity(m);
    let mut total: f64 = pool.iter().map(|p| p.1).sum();
    for _ in 0..m {
        let mut target = rng.random::<f64>() * total;
        let mut pick = pool.len() - 1;
        for (i, &(_, w)) in pool.iter().enumerate() {
            if target < w {
                pick = i;
                break;
            }
            target -= w;
        }
        let (item, w) = pool.swap_remove(pick);
        total -= w;
        out.push(item);
    }
    out
}

/// Picks one index with probability proportional to the reciprocal of its
/// frequency weight: rarer items are likelier foci.
pub fn choose_focus<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    assert!(!weights.is_empty(), "choose_focus needs at least one item");
    let inverse: Vec<f64> = weights.iter().map(|w| 1.0 / w).collect();
    let total: f64 = inverse.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, w) in inverse.iter().enumerate() {
        if target < *w {
            return i;
        }
        target -= w;
    }
    inverse.len() - 1
}

/// Focus-selection probabilities implied by [`choose_focus`].
pub fn focus_probabilities(weights: &[f64]) -> Vec<f64> {
    let inverse: Vec<f64> = weights.iter().map(|w| 1.0 / w).collect();
    let total: f64 = inverse.iter().sum();
    inverse.into_iter().map(|w| w / total).collect()
}

/// Draws from the items `0..n` other than `exclude`: uniformly when `weights`
/// is `None`, otherwise by sequential weighted draws.
pub(crate) fn draw_excluding<R: Rng + ?Sized>(
    n: usize,
    exclude: usize,
    m: usize,
    weights: Option<&[f64]>,
    rng: &mut R,
    out: &mut Vec<usize>,
) {
    out.clear();
    debug_assert!(m < n);
    match weights {
        None => {
            for i in index::sample(rng, n - 1, m) {
                out.push(if i >= exclude { i + 1 } else { i });
            }
        }
        Some(w) => {
            let mut pool: Vec<(usize, f64)> = (0..n)
                .filter(|&i| i != exclude)
                .map(|i| (i, w[i]))
                .collect();
            out.extend(draw_weighted(&mut pool, m, rng));
        }
    }
}

/// Focus draw over `0..n`: uniform when `weights` is `None`.
pub(crate) fn draw_focus<R: Rng + ?Sized>(n: usize, weights: Option<&[f64]>, rng: &mut R) -> usize {
    match weights {
        None => rng.random_range(0..n),
        Some(w) => choose_focus(&w[..n], rng),
    }
}
