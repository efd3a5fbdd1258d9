//! Seeded simulator of inflectional systems evolving under iterated
//! paradigm cell filling.
//!
//! A [`Lexicon`] is a lexemes × cells grid of exponent indices. Each cycle a
//! [`CellFiller`] holds out one cell of one lexeme and refills it from
//! analogical evidence; [`metrics`] measures the resulting structure and
//! [`runner`] drives seeded batches of runs. [`combinatorics`] computes the
//! exact probabilities behind four-part analogies.

pub mod cellfill;
pub mod combinatorics;
pub mod error;
pub mod lexicon;
pub mod metrics;
pub mod runner;
pub mod sampling;

pub use cellfill::{CellFiller, ChangeRecord, Orientation, StepConfig};
pub use error::{Error, Result};
pub use lexicon::{init_random_lexicon, ClassSignature, ExponentId, Lexicon};
pub use metrics::MetricsFrame;
pub use runner::{preset_experiment, run_batch, run_simulation, SimulationConfig};
pub use sampling::{run_rng, SamplePlan, SimRng, ZipfSpec};
