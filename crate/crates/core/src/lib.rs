//! Cuckoo search with heavy-tailed global walks.
//!
//! - [`htdist`]: step-length laws (Lévy via Mantegna, Mittag-Leffler,
//!   Pareto, Cauchy, Weibull) behind one seeded sampler.
//! - [`bench`]: classical test functions and the shifted/rotated CEC 2005
//!   set F1–F10.
//! - [`cuckoo`]: the optimizer and its five variants.
//! - [`stats`]: Wilcoxon signed-rank and Friedman tests, comparison tables.
//! - [`fode`]: a fractional-order financial system and parameter
//!   identification on top of the optimizer.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` and `*32` aliases below fix the type.

pub mod bench;
pub mod cuckoo;
pub mod error;
pub mod fode;
pub mod htdist;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod stats;

pub use bench::{get_problem, suite, FunctionId, SuiteManifest};
pub use cuckoo::{make_variant, run, CsConfig, Objective, Variant};
pub use error::{Error, Result};
pub use fode::{identify, simulate, IdentifyOptions};
pub use htdist::{DistKind, StepSampler};
pub use rng::{DrawSource, RandomStream};
pub use scalar::{fmt17, Scalar};

pub type DistributionSpec64 = htdist::DistributionSpec<f64>;
pub type BenchmarkProblem64 = bench::BenchmarkProblem<f64>;
pub type CsConfig64 = cuckoo::CsConfig<f64>;
pub type Nest64 = cuckoo::Nest<f64>;
pub type RunRecord64 = cuckoo::RunRecord<f64>;
pub type FinancialSystem64 = fode::FinancialSystem<f64>;
pub type Trajectory64 = fode::Trajectory<f64>;
pub type IdentificationTask64 = fode::IdentificationTask<f64>;
pub type ResultMatrix64 = stats::ResultMatrix<f64>;

pub type DistributionSpec32 = htdist::DistributionSpec<f32>;
pub type BenchmarkProblem32 = bench::BenchmarkProblem<f32>;
pub type CsConfig32 = cuckoo::CsConfig<f32>;
pub type RunRecord32 = cuckoo::RunRecord<f32>;
pub type FinancialSystem32 = fode::FinancialSystem<f32>;
