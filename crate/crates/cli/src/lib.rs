//! Command-line front end for the periodic orientation DMP library:
//! synthetic demo generation, training, rollout, oscillator coupling, and
//! CSV emission for external plotting.

// `!(x > 0)` deliberately rejects NaN where `x <= 0` would accept it
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod synth;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
