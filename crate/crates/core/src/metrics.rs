//! Structure and complexity measures over a lexicon.
//!
//! Probabilities are type frequencies over the current lexemes (each lexeme
//! weighs 1). Entropies are in bits. Pairwise means run over ordered pairs
//! of distinct variables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cellfill::Orientation;
use crate::error::{config_err, Error, Result};
use crate::lexicon::{ClassSignature, Lexicon};

/// Every tracked measure at one cycle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsFrame {
    pub cycle: u64,
    pub mean_cond_entropy: f64,
    pub mean_theils_u: f64,
    pub class_count: usize,
    pub mean_exponents_per_cell: f64,
    /// Classes gained plus classes lost since one turnover gap ago.
    pub turnover: Option<usize>,
    pub largest_class: usize,
    pub second_class: usize,
    pub zone_count: usize,
}

impl MetricsFrame {
    /// Metric names in CSV column order, paired with their values.
    pub fn named_values(&self) -> [(&'static str, Option<f64>); 8] {
        [
            ("mean_cond_entropy", Some(self.mean_cond_entropy)),
            ("mean_theils_u", Some(self.mean_theils_u)),
            ("classes", Some(self.class_count as f64)),
            ("mean_exponents_per_cell", Some(self.mean_exponents_per_cell)),
            ("turnover", self.turnover.map(|t| t as f64)),
            ("largest_class", Some(self.largest_class as f64)),
            ("second_class", Some(self.second_class as f64)),
            ("zones", Some(self.zone_count as f64)),
        ]
    }
}

/// Evaluates every measure except turnover, which needs history.
///
/// For metamorphome runs the allomorph indices are only comparable within a
/// lexeme, so the entropy measures treat lexemes as the variables and cells
/// as the observations.
pub fn evaluate(lexicon: &Lexicon, orientation: Orientation, cycle: u64) -> MetricsFrame {
    let (mean_cond_entropy, mean_theils_u) = match orientation {
        Orientation::Rhizomorphome => cellwise_means(lexicon),
        Orientation::Metamorphome => lexemewise_means(lexicon),
    };
    let sizes = lexicon.class_sizes();
    let (largest_class, second_class) = top_two(sizes.values().copied());
    MetricsFrame {
        cycle,
        mean_cond_entropy,
        mean_theils_u,
        class_count: sizes.len(),
        mean_exponents_per_cell: mean_exponents_per_cell(lexicon),
        turnover: None,
        largest_class,
        second_class,
        zone_count: lexicon.zone_count(),
    }
}

fn entropy_from_counts(counts: impl Iterator<Item = usize>, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let h: f64 = counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// Counts runs of equal values in a sorted slice.
fn run_lengths<T: PartialEq>(sorted: &[T]) -> impl Iterator<Item = usize> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        if i >= sorted.len() {
            return None;
        }
        let start = i;
        while i < sorted.len() && sorted[i] == sorted[start] {
            i += 1;
        }
        Some(i - start)
    })
}

/// Shannon entropy of the empirical distribution of `values`.
pub fn entropy_of(values: &[u16]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    entropy_from_counts(run_lengths(&v), v.len())
}

/// Joint entropy of paired observations.
pub fn joint_entropy_of(x: &[u16], y: &[u16]) -> f64 {
    assert_eq!(x.len(), y.len());
    let mut joint: Vec<u32> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| ((a as u32) << 16) | b as u32)
        .collect();
    joint.sort_unstable();
    entropy_from_counts(run_lengths(&joint), joint.len())
}

/// `H(X|Y) = H(X,Y) - H(Y)`, clamped into `[0, H(X)]`.
pub fn conditional_entropy_of(x: &[u16], y: &[u16]) -> f64 {
    let hx = entropy_of(x);
    (joint_entropy_of(x, y) - entropy_of(y)).clamp(0.0, hx)
}

/// Theil's U from precomputed `H(X)` and `H(X|Y)`; zero when `H(X) = 0`.
pub fn theils_u_from(hx: f64, hx_given_y: f64) -> f64 {
    if hx <= 1e-12 {
        0.0
    } else {
        ((hx - hx_given_y) / hx).clamp(0.0, 1.0)
    }
}

fn column_values(lexicon: &Lexicon, cell: usize) -> Vec<u16> {
    lexicon.column(cell).map(|e| e.0).collect()
}

fn check_cell(lexicon: &Lexicon, cell: usize) -> Result<()> {
    if cell >= lexicon.num_cells() {
        return Err(Error::OutOfRange {
            what: "cell",
            index: cell,
            size: lexicon.num_cells(),
        });
    }
    Ok(())
}

fn check_pair(lexicon: &Lexicon, x: usize, y: usize) -> Result<()> {
    check_cell(lexicon, x)?;
    check_cell(lexicon, y)?;
    if x == y {
        return config_err(format!("conditional measures need two distinct cells, got {x} twice"));
    }
    Ok(())
}

pub fn cell_entropy(lexicon: &Lexicon, cell: usize) -> Result<f64> {
    check_cell(lexicon, cell)?;
    Ok(entropy_of(&column_values(lexicon, cell)))
}

pub fn conditional_entropy(lexicon: &Lexicon, x: usize, y: usize) -> Result<f64> {
    check_pair(lexicon, x, y)?;
    Ok(conditional_entropy_of(
        &column_values(lexicon, x),
        &column_values(lexicon, y),
    ))
}

pub fn theils_u(lexicon: &Lexicon, x: usize, y: usize) -> Result<f64> {
    check_pair(lexicon, x, y)?;
    let (xs, ys) = (column_values(lexicon, x), column_values(lexicon, y));
    let hx = entropy_of(&xs);
    Ok(theils_u_from(hx, conditional_entropy_of(&xs, &ys)))
}

/// Mean `H(X|Y)` and mean `U(X|Y)` over ordered pairs of distinct variables.
fn pairwise_means(vars: &[Vec<u16>]) -> (f64, f64) {
    let n = vars.len();
    if n < 2 {
        return (0.0, 0.0);
    }
    let h: Vec<f64> = vars.iter().map(|v| entropy_of(v)).collect();
    let (mut sum_h, mut sum_u) = (0.0, 0.0);
    for a in 0..n {
        for b in a + 1..n {
            let hab = joint_entropy_of(&vars[a], &vars[b]);
            let a_given_b = (hab - h[b]).clamp(0.0, h[a]);
            let b_given_a = (hab - h[a]).clamp(0.0, h[b]);
            sum_h += a_given_b + b_given_a;
            sum_u += theils_u_from(h[a], a_given_b) + theils_u_from(h[b], b_given_a);
        }
    }
    let pairs = (n * (n - 1)) as f64;
    (sum_h / pairs, sum_u / pairs)
}

fn cellwise_means(lexicon: &Lexicon) -> (f64, f64) {
    let columns: Vec<Vec<u16>> = (0..lexicon.num_cells())
        .map(|c| column_values(lexicon, c))
        .collect();
    pairwise_means(&columns)
}

pub fn mean_conditional_entropy(lexicon: &Lexicon) -> f64 {
    cellwise_means(lexicon).0
}

pub fn mean_theils_u(lexicon: &Lexicon) -> f64 {
    cellwise_means(lexicon).1
}

/// Pairwise means with lexemes as variables over the cells. Identical rows
/// are grouped so the cost scales with the number of distinct rows.
pub fn lexemewise_means(lexicon: &Lexicon) -> (f64, f64) {
    let lexemes = lexicon.num_lexemes();
    if lexemes < 2 {
        return (0.0, 0.0);
    }
    let mut groups: Vec<(Vec<u16>, usize)> = {
        let sizes = lexicon.class_sizes();
        sizes
            .into_iter()
            .map(|(row, n)| (row.iter().map(|e| e.0).collect(), n))
            .collect()
    };
    groups.sort_unstable();
    let h: Vec<f64> = groups.iter().map(|(r, _)| entropy_of(r)).collect();
    let (mut sum_h, mut sum_u) = (0.0, 0.0);
    for a in 0..groups.len() {
        let na = groups[a].1 as f64;
        // pairs of distinct lexemes sharing a row: H(X|Y) = 0
        if h[a] > 1e-12 {
            sum_u += na * (na - 1.0);
        }
        for b in a + 1..groups.len() {
            let w = na * groups[b].1 as f64;
            let hab = joint_entropy_of(&groups[a].0, &groups[b].0);
            let a_given_b = (hab - h[b]).clamp(0.0, h[a]);
            let b_given_a = (hab - h[a]).clamp(0.0, h[b]);
            sum_h += w * (a_given_b + b_given_a);
            sum_u += w * (theils_u_from(h[a], a_given_b) + theils_u_from(h[b], b_given_a));
        }
    }
    let pairs = (lexemes * (lexemes - 1)) as f64;
    (sum_h / pairs, sum_u / pairs)
}

/// `|S1 ∪ S2| - |S1 ∩ S2|`.
pub fn class_turnover(s1: &BTreeSet<ClassSignature>, s2: &BTreeSet<ClassSignature>) -> usize {
    s1.symmetric_difference(s2).count()
}

fn top_two(sizes: impl Iterator<Item = usize>) -> (usize, usize) {
    let (mut first, mut second) = (0, 0);
    for s in sizes {
        if s > first {
            second = first;
            first = s;
        } else if s > second {
            second = s;
        }
    }
    (first, second)
}

/// Sizes of the two most populous classes; the second is 0 with one class.
pub fn largest_two_classes(lexicon: &Lexicon) -> (usize, usize) {
    top_two(lexicon.class_sizes().values().copied())
}

pub fn mean_exponents_per_cell(lexicon: &Lexicon) -> f64 {
    let cells = lexicon.num_cells();
    let mut seen = vec![false; lexicon.max_inventory()];
    let mut total = 0usize;
    for c in 0..cells {
        seen.iter_mut().for_each(|s| *s = false);
        for e in lexicon.column(c) {
            let slot = &mut seen[e.index()];
            if !*slot {
                *slot = true;
                total += 1;
            }
        }
    }
    total as f64 / cells as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(rows: &[&[u16]]) -> Lexicon {
        let rows: Vec<Vec<u16>> = rows.iter().map(|r| r.to_vec()).collect();
        Lexicon::from_rows_inferred(&rows).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn single_cell_entropy() {
        assert_eq!(entropy_of(&[3, 3, 3, 3]), 0.0);
        assert!(close(entropy_of(&[0, 0, 1, 1]), 1.0));
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!(close(entropy_of(&[0, 0, 0, 1]), expected));
        assert!(close(expected, 0.811_278_124_459_132_8));
        let l = lex(&[&[0, 1], &[0, 1], &[0, 1], &[1, 1]]);
        assert!(close(cell_entropy(&l, 0).unwrap(), expected));
        assert!(cell_entropy(&l, 2).is_err());
    }

    #[test]
    fn conditional_entropy_cases() {
        // X determined by Y
        let l = lex(&[&[0, 2], &[1, 0], &[1, 0], &[2, 1]]);
        assert!(close(conditional_entropy(&l, 0, 1).unwrap(), 0.0));
        // independent binary columns
        let l = lex(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(close(conditional_entropy(&l, 0, 1).unwrap(), 1.0));
        assert!(close(theils_u(&l, 0, 1).unwrap(), 0.0));
        assert!(conditional_entropy(&l, 1, 1).is_err());
        assert!(theils_u(&l, 0, 0).is_err());
    }

    #[test]
    fn theils_u_cases() {
        let constant = lex(&[&[0, 0], &[0, 1], &[0, 2]]);
        assert_eq!(theils_u(&constant, 0, 1).unwrap(), 0.0);
        let determined = lex(&[&[0, 1], &[1, 0], &[2, 2]]);
        assert!(close(theils_u(&determined, 0, 1).unwrap(), 1.0));
    }

    #[test]
    fn means() {
        let uniform = lex(&[&[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(mean_conditional_entropy(&uniform), 0.0);
        assert_eq!(mean_theils_u(&uniform), 0.0);

        let l = lex(&[&[0, 0], &[0, 1], &[1, 1], &[1, 1], &[2, 0]]);
        let both = (conditional_entropy(&l, 0, 1).unwrap() + conditional_entropy(&l, 1, 0).unwrap()) / 2.0;
        assert!(close(mean_conditional_entropy(&l), both));
        let u = (theils_u(&l, 0, 1).unwrap() + theils_u(&l, 1, 0).unwrap()) / 2.0;
        assert!(close(mean_theils_u(&l), u));

        // two perfectly correlated classes
        let two = lex(&[&[0, 3, 1], &[0, 3, 1], &[2, 1, 4], &[2, 1, 4]]);
        assert!(close(mean_theils_u(&two), 1.0));
    }

    #[test]
    fn turnover() {
        let s = |rows: &[&[u16]]| -> BTreeSet<ClassSignature> {
            rows.iter().map(|r| ClassSignature::from_indices(r)).collect()
        };
        let a = s(&[&[0, 0], &[1, 1]]);
        assert_eq!(class_turnover(&a, &a), 0);
        assert_eq!(
            class_turnover(&s(&[&[0, 0], &[0, 1], &[0, 2]]), &s(&[&[1, 0], &[1, 1]])),
            5
        );
        assert_eq!(class_turnover(&s(&[&[0, 0], &[1, 1]]), &s(&[&[1, 1], &[2, 2]])), 2);
    }

    #[test]
    fn largest_classes() {
        let uniform: Vec<Vec<u16>> = vec![vec![0, 0]; 100];
        assert_eq!(
            largest_two_classes(&Lexicon::from_rows_inferred(&uniform).unwrap()),
            (100, 0)
        );
        let mut rows = vec![vec![0u16, 0]; 60];
        rows.extend(vec![vec![1, 1]; 30]);
        rows.extend(vec![vec![2, 2]; 10]);
        assert_eq!(largest_two_classes(&Lexicon::from_rows_inferred(&rows).unwrap()), (60, 30));
    }

    #[test]
    fn exponents_per_cell() {
        assert_eq!(mean_exponents_per_cell(&lex(&[&[1, 1], &[1, 1]])), 1.0);
        assert_eq!(mean_exponents_per_cell(&lex(&[&[0, 0], &[1, 0]])), 1.5);
    }

    #[test]
    fn lexemewise_matches_transposed_cellwise() {
        let rows: Vec<Vec<u16>> = vec![
            vec![0, 0, 1, 1, 2],
            vec![0, 0, 1, 1, 2],
            vec![3, 1, 1, 0, 0],
            vec![2, 2, 2, 2, 2],
            vec![4, 0, 4, 0, 1],
        ];
        let l = Lexicon::from_rows_inferred(&rows).unwrap();
        let transposed: Vec<Vec<u16>> = (0..5).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
        let t = Lexicon::from_rows_inferred(&transposed).unwrap();
        let (h, u) = lexemewise_means(&l);
        assert!(close(h, mean_conditional_entropy(&t)));
        assert!(close(u, mean_theils_u(&t)));
    }

    #[test]
    fn constant_rows_have_zero_lexemewise_u() {
        let l = lex(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(lexemewise_means(&l), (0.0, 0.0));
        let f = evaluate(&l, Orientation::Metamorphome, 7);
        assert_eq!(f.zone_count, 1);
        assert_eq!(f.mean_theils_u, 0.0);
        // the cellwise view sees perfectly predictive columns
        assert!(close(evaluate(&l, Orientation::Rhizomorphome, 7).mean_theils_u, 1.0));
    }
}
