//! Experiment front end for `carleson-core`: configuration, orchestration and
//! report emission.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod selftest;

pub use config::{parse_config, Command, ExperimentConfig, PartialConfig};
pub use error::{ErrorRecord, LabError};
pub use report::{read_report, Report, Status};
pub use run::{execute, run_to_report};

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "CARLESON_LAB_THREADS";

/// Thread count from the flag, then the environment.
pub fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|n| *n > 0))
}
