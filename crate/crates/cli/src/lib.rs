//! Log replay front end for the `rackforce` estimator.
//!
//! Reads a TOML configuration, a driving log with optional IMU slope and
//! cleat files, runs the selected model variants and writes per-variant
//! estimates, a metrics summary and plot data.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod run;

pub use error::{CliError, EXIT_INPUT_ERROR, EXIT_NUMERIC_FAILURE};
pub use run::{run, RunArgs, RunReport};
