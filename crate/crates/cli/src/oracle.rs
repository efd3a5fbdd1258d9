//! The four-part analogy probability table as CSV.

use std::fmt::Write as _;

use morphoevo_core::combinatorics::{
    brute_force_counts, check_feasible, contingency_probabilities, format_ratio, BRUTE_FORCE_MAX_CELLS,
};
use num_bigint::BigInt;

use crate::error::CliResult;

pub const ORACLE_HEADER: &str = "m,n,k,N,p_i,p_j,p_0,oracle_match";

/// One row per feasible `(m, n, k)` with `m, n <= max_mn`. `oracle_match`
/// compares against exhaustive enumeration, or is `skipped` for grids too
/// large to enumerate.
pub fn oracle_table(max_mn: usize) -> CliResult<String> {
    let mut out = String::from(ORACLE_HEADER);
    out.push('\n');
    for m in 1..=max_mn {
        for n in 1..=max_mn {
            for k in 1..m * n {
                if check_feasible(m, n, k).is_err() {
                    continue;
                }
                let p = contingency_probabilities(m, n, k)?;
                let matches = if m * n <= BRUTE_FORCE_MAX_CELLS {
                    let b = brute_force_counts(m, n, k)?;
                    let same = p.total == BigInt::from(b.total)
                        && p.count_same_row == BigInt::from(b.same_row())
                        && p.count_same_col == BigInt::from(b.same_col())
                        && p.count_other == BigInt::from(b.other());
                    same.to_string()
                } else {
                    "skipped".to_string()
                };
                let _ = writeln!(
                    out,
                    "{m},{n},{k},{},{},{},{},{matches}",
                    p.total,
                    format_ratio(&p.p_same_row),
                    format_ratio(&p.p_same_col),
                    format_ratio(&p.p_other)
                );
            }
        }
    }
    Ok(out)
}
