//! Experiment runner behind the `bandgap-qed` binary: configuration,
//! CSV and SVG output, and one driver per command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod format;
pub mod run;
pub mod svg;

pub use config::{Command, ConfigError, ExperimentConfig, KernelSource, MethodChoice};
pub use run::{build_artifacts, configure_threads, run, Artifact, RunError};
