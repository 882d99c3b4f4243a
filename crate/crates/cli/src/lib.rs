//! Experiment runner for the nslab laboratory: config parsing, dispatch,
//! report emission and run manifests.

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod report;

pub use config::{parse_config, Experiment, ExperimentConfig, Format};
pub use error::{CliError, ConfigError, ConfigErrors};
pub use manifest::{run, RunManifest};
