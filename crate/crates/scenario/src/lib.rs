//! Scenario files, parameter sweeps and table output for `dst-core`.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

pub use config::{parse_config, Entry, Operation, OutputFormat, ScenarioConfig};
pub use error::{Location, Result, ScenarioError};
pub use run::run_scenario;
pub use table::{emit, Cell, ResultTable};
