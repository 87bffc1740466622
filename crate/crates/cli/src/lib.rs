//! Command-line front end for the black-hole clock model: configuration,
//! orchestration and deterministic artifact output.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, Command, ConfigError, Overrides, RunConfig};
pub use report::{Check, Outcome, RunReport};
pub use run::{run, RunError};
