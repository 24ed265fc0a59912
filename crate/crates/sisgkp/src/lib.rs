//! Experiment driver for `sisgkp-core`: seeded surveys, decoding curves,
//! bound tables and parameter checks, emitted as CSV and JSON.
//!
//! The same runners back the `sisgkp` binary and the test suite.

pub mod cli;
pub mod error;
pub mod format;
pub mod run;
pub mod spec;

pub use error::CliError;
pub use format::CodeDocument;
pub use run::Output;
pub use spec::{ExperimentKind, ExperimentSpec, Grid};
