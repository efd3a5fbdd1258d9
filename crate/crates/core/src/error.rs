use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates a precondition (zero counts, too many
    /// pivots, bad fractions, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{what} index {index} out of range (size {size})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("infeasible contingency parameters (m={m}, n={n}, k={k}): need max(m, n) <= k < m*n")]
    Infeasible { m: usize, n: usize, k: usize },

    #[error("enumeration too large: {cells} grid positions (limit {limit})")]
    TooLarge { cells: usize, limit: usize },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("malformed lexicon CSV: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
