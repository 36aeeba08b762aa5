//! Command-line front end for `nullprop-core`: p-value ingestion, command
//! dispatch and report output.

pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod run;

pub use config::{Command, IntervalSpec, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use input::read_pvalues;
pub use output::write_report;
pub use run::{replay, run, Envelope, Report};
