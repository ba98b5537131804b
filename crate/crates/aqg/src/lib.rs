//! Command-line runner for the anisotropic quasi-geostrophic solver.
//!
//! * [`config`]: the TOML run configuration and its validation.
//! * [`checkpoint`]: the binary checkpoint format.
//! * [`run`]: the `simulate`, `picard`, `lemmas`, `sweep` and `gevrey`
//!   subcommands and their output files.
//!
//! Exit codes: 0 success, 1 configuration error, 2 solver abort, 3 I/O
//! error, 4 inequality violation.

pub mod checkpoint;
pub mod config;
pub mod run;

pub use config::{ConfigError, RunConfig};
pub use run::RunError;
