//! Scenario runner and report verifier for `dynideal`.

pub mod cert;
pub mod error;
pub mod report;
pub mod scenario;
pub mod suites;

pub use error::CliError;
pub use report::{report_verify, scenario_run, verify_report, Report, Verification};
pub use scenario::{catalog, load, scenario_list, Overrides, Scenario};

/// Environment variable naming the default report directory.
pub const REPORT_DIR_ENV: &str = "DYNIDEAL_REPORT_DIR";
