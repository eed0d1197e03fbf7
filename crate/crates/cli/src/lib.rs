//! Driver plumbing for the `geomod` binary: configuration, cached sessions
//! and verification suites.

pub mod config;
pub mod session;
pub mod suites;

pub use config::{Format, RunConfig};
pub use session::Session;
pub use suites::{run_suite, SuiteReport, SUITES};
