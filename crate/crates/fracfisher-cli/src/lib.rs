//! Experiment driver for `fracfisher`: config parsing, one runner per
//! command, and atomic emission of reports and traces.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, read_config, Command, ConfigError, ExperimentConfig, Law};
pub use output::{write_outputs, Metadata};
pub use run::{run, Contract, Report, RunOutput, Trace};
