//! Command-line front end: file ingestion, command dispatch and report output.

pub mod commands;
pub mod error;
pub mod input;
pub mod output;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
pub use input::{load_complex_signals, load_signals, signals_to_csv, SignalSet};
