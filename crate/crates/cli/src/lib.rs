//! Experiment harness on top of `htcs`: benchmark runs persisted to a
//! results store, variant comparison, parameter sweeps, distribution
//! sampling and parameter identification.

pub mod compare;
pub mod config;
pub mod dist;
pub mod ident;
pub mod store;
pub mod sweep;

pub use config::{ExperimentConfig, MaxFesRule, NpRule};
pub use store::{bench_run, ResultsStore};
