//! Experiment harness: configuration, reproducible execution, persistence.
//!
//! A run is `(config, seed) -> output directory`: CSV result files plus a
//! JSON manifest echoing the resolved configuration, the produced files and
//! a pass/fail summary of every assertion. Re-running the same config and
//! seed reproduces every output byte and every non-timing manifest field,
//! for any worker count; the wall-time field is the only thing that moves.

pub mod config;
pub mod csvout;
pub mod manifest;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentKind};
pub use manifest::{Assertion, RunManifest};
pub use runner::run;
