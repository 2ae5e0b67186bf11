//! Library surface of the scenario runner, shared by the `sim` binary and
//! the integration tests.

pub mod config;
pub mod output;
pub mod run;

pub use config::{validate_config, Command, ConfigError, Payload, Scenario};
pub use run::{resolve_output_dir, run_scenario, ReportBundle, RunError};

/// Process exit codes, documented in the README error table.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const IO: i32 = 4;
}
