//! Driver for the fusion pipeline: configuration, the `cfa` subcommands,
//! CSV reports, SVG plots and the synthetic example inputs.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixture;
pub mod pipeline;
pub mod plot;
pub mod reports;

pub use error::{CliError, CliResult};
