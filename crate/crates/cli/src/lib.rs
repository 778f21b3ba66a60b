//! Command-line front end: analytic and simulated sweeps, figure presets,
//! and SNR-gap comparisons, all written as CSV.

pub mod app;
pub mod compare;
pub mod error;
pub mod presets;
pub mod runs;
pub mod table;

pub use error::{CliError, Result};
