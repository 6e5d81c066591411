//! Library side of the `z2n` command-line tool: reports, sweeps and figures
//! built on `z2n-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod config;
pub mod error;
pub mod format;
pub mod portrait;
pub mod region;
pub mod report;
pub mod sweep;
pub mod svg;

pub use app::{run, Cli};
pub use error::{CliError, CliResult};
