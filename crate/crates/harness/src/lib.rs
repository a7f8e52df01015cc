//! Verification suites, counterexample searches and the `klimm` command line
//! built on `klimm-core`.

pub mod cli;
pub mod config;
pub mod context;
pub mod labels;
pub mod report;
pub mod runner;
pub mod search;
pub mod suites;
pub mod verify;

pub use config::{Config, Format};
pub use context::Context;
pub use report::{SuiteReport, Witness};
