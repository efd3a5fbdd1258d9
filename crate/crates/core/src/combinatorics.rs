//! Exact probabilities for a four-part analogy under a coverage constraint.
//!
//! Cell 1 has `m` exponents, cell 2 has `n`, and the language permits `k`
//! of the `m·n` combinations such that every exponent of either cell occurs
//! in at least one permitted combination. Given that the evidence lexeme's
//! combination (the pivot) is permitted, every admissible set of `k`
//! combinations is taken as equally likely. The probability that some other
//! combination is permitted then depends only on whether it shares the
//! pivot's row, its column, or neither.
//!
//! Counts are inclusion–exclusion sums over excluded rows `r` and columns
//! `s`, evaluated in exact integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest grid [`brute_force_counts`] will enumerate.
pub const BRUTE_FORCE_MAX_CELLS: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyProbabilities {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Admissible arrangements containing the pivot.
    pub total: BigInt,
    /// Arrangements containing the pivot and one given same-row position.
    pub count_same_row: BigInt,
    pub count_same_col: BigInt,
    pub count_other: BigInt,
    pub p_same_row: BigRational,
    pub p_same_col: BigRational,
    pub p_other: BigRational,
}

/// `C(a, b)`, zero when `b < 0`, `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

pub fn check_feasible(m: usize, n: usize, k: usize) -> Result<()> {
    if m == 0 || n == 0 || k < m.max(n) || k >= m * n {
        return Err(Error::Infeasible { m, n, k });
    }
    Ok(())
}

/// Inclusion–exclusion over `r` excluded rows out of `free_rows` and `s`
/// excluded columns out of `free_cols`, placing `place` further marks in the
/// remaining grid minus `fixed` pre-placed marks.
fn covering_count(m: usize, n: usize, free_rows: usize, free_cols: usize, fixed: usize, place: usize) -> BigInt {
    let mut sum = BigInt::zero();
    for r in 0..=free_rows {
        for s in 0..=free_cols {
            let slots = ((m - r) * (n - s)) as i64 - fixed as i64;
            let term = binomial(free_rows as i64, r as i64)
                * binomial(free_cols as i64, s as i64)
                * binomial(slots, place as i64);
            if (r + s) % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
    }
    sum
}

pub fn contingency_probabilities(m: usize, n: usize, k: usize) -> Result<ContingencyProbabilities> {
    check_feasible(m, n, k)?;
    // The pivot's row and column are already covered; a second mark in the
    // pivot row also covers one more column, and so on.
    let total = covering_count(m, n, m - 1, n - 1, 1, k - 1);
    let count_same_row = covering_count(m, n, m - 1, n - 2, 2, k - 2);
    let count_same_col = covering_count(m, n, m - 2, n - 1, 2, k - 2);
    let count_other = covering_count(m, n, m - 2, n - 2, 2, k - 2);
    let ratio = |c: &BigInt| BigRational::new(c.clone(), total.clone());
    Ok(ContingencyProbabilities {
        m,
        n,
        k,
        p_same_row: ratio(&count_same_row),
        p_same_col: ratio(&count_same_col),
        p_other: ratio(&count_other),
        total,
        count_same_row,
        count_same_col,
        count_other,
    })
}

/// Result of enumerating every admissible arrangement directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceCounts {
    pub total: u64,
    /// `per_position[row][col]`: arrangements containing that position.
    pub per_position: Vec<Vec<u64>>,
}

impl BruteForceCounts {
    pub fn same_row(&self) -> u64 {
        self.per_position[0][1]
    }

    pub fn same_col(&self) -> u64 {
        self.per_position[1][0]
    }

    pub fn other(&self) -> u64 {
        self.per_position[1][1]
    }

    /// True when every same-row position has the same count, and likewise for
    /// same-column and unrelated positions.
    pub fn position_classes_uniform(&self) -> bool {
        let rows = self.per_position.len();
        let cols = self.per_position[0].len();
        (0..rows).all(|i| {
            (0..cols).all(|j| {
                let expected = match (i == 0, j == 0) {
                    (true, true) => self.total,
                    (true, false) => self.same_row(),
                    (false, true) => self.same_col(),
                    (false, false) => self.other(),
                };
                self.per_position[i][j] == expected
            })
        })
    }
}

/// Enumerates every `k`-subset of the grid that contains position (0, 0) and
/// touches every row and column. Limited to grids of at most
/// [`BRUTE_FORCE_MAX_CELLS`] positions.
pub fn brute_force_counts(m: usize, n: usize, k: usize) -> Result<BruteForceCounts> {
    check_feasible(m, n, k)?;
    let cells = m * n;
    if cells > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::TooLarge {
            cells,
            limit: BRUTE_FORCE_MAX_CELLS,
        });
    }
    let row_masks: Vec<u32> = (0..m)
        .map(|i| (0..n).fold(0u32, |acc, j| acc | 1 << (i * n + j)))
        .collect();
    let col_masks: Vec<u32> = (0..n)
        .map(|j| (0..m).fold(0u32, |acc, i| acc | 1 << (i * n + j)))
        .collect();

    let mut total = 0u64;
    let mut per_position = vec![vec![0u64; n]; m];
    // k-1 further marks among positions 1..cells, as bit subsets (Gosper).
    let others = cells - 1;
    let choose = k - 1;
    let mut subset: u32 = (1u32 << choose) - 1;
    let limit: u32 = 1u32 << others;
    while subset < limit {
        let arrangement = (subset << 1) | 1;
        if row_masks.iter().all(|&r| arrangement & r != 0)
            && col_masks.iter().all(|&c| arrangement & c != 0)
        {
            total += 1;
            let mut bits = arrangement;
            while bits != 0 {
                let pos = bits.trailing_zeros() as usize;
                per_position[pos / n][pos % n] += 1;
                bits &= bits - 1;
            }
        }
        if choose == 0 {
            break;
        }
        let lowest = subset & subset.wrapping_neg();
        let ripple = subset + lowest;
        subset = (((ripple ^ subset) >> 2) / lowest) | ripple;
    }
    Ok(BruteForceCounts { total, per_position })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    /// `1 > p_other`, `p_other >= p_same_row` and `p_other >= p_same_col`.
    pub holds: bool,
    pub strict_row: bool,
    pub strict_col: bool,
}

impl InequalityCheck {
    pub fn strict(&self) -> bool {
        self.strict_row && self.strict_col
    }
}

/// Checks that unrelated combinations are likelier than combinations sharing
/// exactly one exponent with the pivot.
pub fn check_inequality(m: usize, n: usize, k: usize) -> Result<InequalityCheck> {
    let p = contingency_probabilities(m, n, k)?;
    let one = BigRational::one();
    let below_one = p.p_other < one && !p.p_other.is_negative();
    Ok(InequalityCheck {
        holds: below_one && p.p_other >= p.p_same_row && p.p_other >= p.p_same_col,
        strict_row: p.p_other > p.p_same_row,
        strict_col: p.p_other > p.p_same_col,
    })
}

/// Renders an exact ratio as `num/den` (or an integer).
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(5, 0), 1.into());
        assert_eq!(binomial(5, 6), 0.into());
        assert_eq!(binomial(5, -1), 0.into());
        assert_eq!(binomial(-2, 1), 0.into());
        assert_eq!(binomial(40, 20), "137846528820".parse::<BigInt>().unwrap());
    }

    #[test]
    fn three_by_three_with_three() {
        let p = contingency_probabilities(3, 3, 3).unwrap();
        assert_eq!(p.total, 2.into());
        assert_eq!(p.p_same_row, q(0, 1));
        assert_eq!(p.p_same_col, q(0, 1));
        assert_eq!(p.p_other, q(1, 2));
    }

    #[test]
    fn three_by_three_with_four() {
        let p = contingency_probabilities(3, 3, 4).unwrap();
        assert_eq!(p.total, 20.into());
        assert_eq!(p.p_same_row, q(1, 4));
        assert_eq!(p.p_same_col, q(1, 4));
        assert_eq!(p.p_other, q(1, 2));
    }

    #[test]
    fn two_by_two() {
        let p = contingency_probabilities(2, 2, 2).unwrap();
        assert_eq!(p.total, 1.into());
        assert_eq!(p.p_other, q(1, 1));
        assert_eq!(p.p_same_row, q(0, 1));
    }

    #[test]
    fn infeasible_rejected() {
        for (m, n, k) in [(3, 3, 2), (3, 3, 9), (0, 3, 3), (1, 3, 3), (2, 4, 3)] {
            assert!(matches!(contingency_probabilities(m, n, k), Err(Error::Infeasible { .. })));
        }
        assert!(matches!(brute_force_counts(5, 6, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(brute_force_counts(3, 3, 4).unwrap().total, 20);
        assert_eq!(brute_force_counts(3, 3, 3).unwrap().total, 2);
        let b = brute_force_counts(4, 3, 5).unwrap();
        let p = contingency_probabilities(4, 3, 5).unwrap();
        assert_eq!(BigInt::from(b.total), p.total);
        assert_eq!(BigInt::from(b.same_row()), p.count_same_row);
        assert_eq!(BigInt::from(b.same_col()), p.count_same_col);
        assert_eq!(BigInt::from(b.other()), p.count_other);
        assert!(b.position_classes_uniform());
    }

    #[test]
    fn inequality_examples() {
        let c = check_inequality(3, 3, 4).unwrap();
        assert!(c.holds && c.strict());
        let c = check_inequality(3, 3, 3).unwrap();
        assert!(c.holds && c.strict());
    }

    #[test]
    fn ratio_formatting() {
        assert_eq!(format_ratio(&q(2, 4)), "1/2");
        assert_eq!(format_ratio(&q(0, 5)), "0");
        assert_eq!(ratio_to_f64(&q(1, 4)), 0.25);
    }
}
