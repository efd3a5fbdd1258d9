use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    /// Malformed JSON, unknown keys or values of the wrong type.
    #[error("config schema: {0}")]
    Schema(String),

    /// Well-formed values that violate a precondition.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("malformed CSV in {}: {msg}", path.display())]
    Csv { path: PathBuf, msg: String },

    #[error("{0}")]
    Other(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::MissingFile(_) => 3,
            CliError::Schema(_) => 4,
            CliError::Infeasible(_) => 5,
            CliError::Csv { .. } => 6,
            CliError::Other(_) | CliError::Io(_) => 1,
        })
    }
}

impl From<morphoevo_core::Error> for CliError {
    fn from(e: morphoevo_core::Error) -> Self {
        use morphoevo_core::Error as E;
        match e {
            E::Config(_) | E::Infeasible { .. } | E::TooLarge { .. } | E::OutOfRange { .. } => {
                CliError::Infeasible(e.to_string())
            }
            E::UnknownPreset(_) | E::Json(_) => CliError::Schema(e.to_string()),
            E::Io(e) => CliError::Io(e),
            E::Csv(msg) => CliError::Csv {
                path: PathBuf::new(),
                msg,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
