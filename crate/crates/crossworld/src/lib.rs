//! File formats, configuration, parallel drivers and the command-line
//! front end for [`crossworld_core`].
//!
//! * [`config`]: JSON run configuration.
//! * [`io`]: CSV and JSON-lines datasets, grid rows and figure tables.
//! * [`runner`]: parallel grid evaluation and block-parallel simulation.
//! * [`report`]: `key=value` reports and summary tables.

#![forbid(unsafe_code)]

pub mod config;
mod error;
pub mod io;
pub mod report;
pub mod runner;

pub use crossworld_core as core;
pub use error::{CliError, Result};
