//! Scenario runner for the generalized Navier–Stokes analyticity
//! experiments: config parsing, initial-data factories, the solve/diagnose
//! pipeline and artifact emission.

pub mod config;
pub mod initial_data;
pub mod plot;
pub mod scenario;
pub mod selftest;

pub use config::{parse_config, parse_str, ConfigError, ScenarioConfig};
pub use initial_data::{make_initial_data, DataKind, DataParams};
pub use scenario::{exit, run_diagnose, run_scenario, RunArtifacts, RunStatus, ScenarioError};

/// Environment variable naming the default output root for relative
/// `output.dir` values.
pub const OUTPUT_ROOT_ENV: &str = "GNS_OUTPUT_ROOT";
