//! Experiment presets, configuration files, study runners and the output
//! directory layout of the `rarelab` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod config;
pub mod presets;
pub mod study;

pub use artifacts::{execute, Execution, THREADS_ENV};
pub use config::{parse_config, parse_file, resolve, Experiment, Study};
pub use presets::Preset;
