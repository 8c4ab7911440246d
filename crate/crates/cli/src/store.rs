//! Benchmark runs and their on-disk layout.
//!
//! ```text
//! <root>/manifest.json                     config plus one entry per run
//! <root>/runs/<variant>/<problem>_D<dim>/run_<r>.json   stored run
//! <root>/runs/<variant>/<problem>_D<dim>/run_<r>.csv    trajectory
//! <root>/finals.csv                        final error of every run
//! <root>/summary.csv                       per-cell statistics
//! ```
//!
//! Every file is a pure function of the configuration, so re-running an
//! experiment rewrites the store byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use htcs::bench::{build, BenchmarkProblem, FunctionId, SuiteManifest};
use htcs::cuckoo::{run, CsConfig, RunRecord};
use htcs::{fmt17, Variant};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// One persisted run: enough to replay it bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredRun {
    pub variant: Variant,
    pub problem: String,
    pub dim: usize,
    pub run: u32,
    /// `base_seed + run`.
    pub run_seed: u64,
    pub config: CsConfig<f64>,
    pub final_error: f64,
    pub record: RunRecord<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRun {
    pub variant: Variant,
    pub problem: String,
    pub dim: usize,
    pub run: u32,
    pub run_seed: u64,
    pub stream_seed: u64,
    pub fingerprint: String,
    /// Path of the stored run, relative to the store root.
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub config: ExperimentConfig,
    pub runs: Vec<ManifestRun>,
}

/// Final errors of one (variant, problem, dim) cell, in run order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub variant: Variant,
    pub problem: String,
    pub dim: usize,
    pub errors: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSummary {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub best: f64,
    pub worst: f64,
}

impl CellSummary {
    /// `std` is the sample standard deviation (0 for a single run).
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let std = if values.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len();
        let median = if k % 2 == 1 { sorted[k / 2] } else { 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]) };
        Self {
            mean,
            std,
            median,
            best: sorted[0],
            worst: sorted[k - 1],
        }
    }
}

pub fn cell_dir(variant: Variant, problem: &str, dim: usize) -> PathBuf {
    Path::new("runs").join(variant.name()).join(format!("{problem}_D{dim}"))
}

fn load_suite_manifest(config: &ExperimentConfig) -> anyhow::Result<SuiteManifest> {
    Ok(match &config.data_manifest {
        Some(p) => SuiteManifest::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => SuiteManifest::default(),
    })
}

/// The optimizer configuration of run `run` of one cell.
pub fn run_config(config: &ExperimentConfig, variant: Variant, dim: usize, run: u32) -> CsConfig<f64> {
    let run_seed = config.base_seed + u64::from(run);
    CsConfig::new(
        config.np.resolve(dim),
        variant.spec(),
        config.max_fes.resolve(dim),
        variant.stream_seed(run_seed),
    )
}

/// Builds a thread pool with `jobs` workers (0 means one per core).
pub fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

/// Runs every (variant, problem, dim, run) of `config` and writes the store.
pub fn bench_run(config: &ExperimentConfig, jobs: usize) -> anyhow::Result<ResultsStore> {
    config.validate()?;
    let suite = load_suite_manifest(config)?;
    let ids = config.problem_ids()?;

    let mut problems: BTreeMap<(FunctionId, usize), BenchmarkProblem<f64>> = BTreeMap::new();
    for &id in &ids {
        for &dim in &config.dims {
            problems.insert((id, dim), build(id, dim, &suite)?);
        }
    }

    let mut tasks = Vec::new();
    for &dim in &config.dims {
        for &id in &ids {
            for &variant in &config.variants {
                for r in 0..config.runs {
                    tasks.push((variant, id, dim, r));
                }
            }
        }
    }

    let stored: Vec<StoredRun> = pool(jobs)?.install(|| {
        tasks
            .par_iter()
            .map(|&(variant, id, dim, r)| {
                let problem = &problems[&(id, dim)];
                let cfg = run_config(config, variant, dim, r);
                let record = run(problem, &cfg)?;
                Ok(StoredRun {
                    variant,
                    problem: id.name().to_string(),
                    dim,
                    run: r,
                    run_seed: config.base_seed + u64::from(r),
                    final_error: problem.error_of(record.final_best.fitness),
                    config: cfg,
                    record,
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;

    let store = ResultsStore::new(&config.out);
    store.write(config, &stored)?;
    Ok(store)
}

/// A results directory.
#[derive(Clone, Debug)]
pub struct ResultsStore {
    pub root: PathBuf,
}

impl ResultsStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    fn write(&self, config: &ExperimentConfig, stored: &[StoredRun]) -> anyhow::Result<()> {
        fs::create_dir_all(&self.root)?;
        let mut manifest = StoreManifest {
            config: config.clone(),
            runs: Vec::with_capacity(stored.len()),
        };
        let mut finals = String::from("variant,problem,dim,run,seed,final_error\n");
        for s in stored {
            let dir = cell_dir(s.variant, &s.problem, s.dim);
            fs::create_dir_all(self.root.join(&dir))?;
            let json_rel = dir.join(format!("run_{:03}.json", s.run));
            let csv_rel = dir.join(format!("run_{:03}.csv", s.run));
            fs::write(self.root.join(&json_rel), serde_json::to_string_pretty(s)? + "\n")?;
            fs::write(self.root.join(&csv_rel), s.record.trajectory_csv())?;
            finals.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.variant,
                s.problem,
                s.dim,
                s.run,
                s.run_seed,
                fmt17(s.final_error)
            ));
            manifest.runs.push(ManifestRun {
                variant: s.variant,
                problem: s.problem.clone(),
                dim: s.dim,
                run: s.run,
                run_seed: s.run_seed,
                stream_seed: s.config.seed,
                fingerprint: s.record.fingerprint.clone(),
                path: json_rel,
            });
        }
        fs::write(self.root.join("finals.csv"), finals)?;

        let mut summary = String::from("variant,problem,dim,runs,mean,std,median,best,worst\n");
        for cell in group_cells(stored.iter().map(|s| (s.variant, s.problem.as_str(), s.dim, s.final_error))) {
            let c = CellSummary::of(&cell.errors);
            summary.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                cell.variant,
                cell.problem,
                cell.dim,
                cell.errors.len(),
                fmt17(c.mean),
                fmt17(c.std),
                fmt17(c.median),
                fmt17(c.best),
                fmt17(c.worst)
            ));
        }
        fs::write(self.root.join("summary.csv"), summary)?;
        fs::write(self.root.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(())
    }

    pub fn manifest(&self) -> anyhow::Result<StoreManifest> {
        let path = self.root.join("manifest.json");
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn load_run(&self, entry: &ManifestRun) -> anyhow::Result<StoredRun> {
        let path = self.root.join(&entry.path);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Re-executes one stored run from its recorded configuration.
    pub fn replay(&self, entry: &ManifestRun) -> anyhow::Result<RunRecord<f64>> {
        let manifest = self.manifest()?;
        let stored = self.load_run(entry)?;
        let suite = load_suite_manifest(&manifest.config)?;
        let problem = build::<f64>(stored.problem.parse()?, stored.dim, &suite)?;
        Ok(run(&problem, &stored.config)?)
    }

    /// Final errors grouped into cells, in first-appearance order.
    pub fn cells(&self) -> anyhow::Result<Vec<Cell>> {
        let path = self.root.join("finals.csv");
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                bail!("finals.csv line {}: expected 6 fields", i + 1);
            }
            let variant: Variant = f[0].parse()?;
            let dim: usize = f[2].parse()?;
            let error: f64 = f[5].parse()?;
            rows.push((variant, f[1].to_string(), dim, error));
        }
        Ok(group_cells(rows.iter().map(|(v, p, d, e)| (*v, p.as_str(), *d, *e))))
    }
}

fn group_cells<'a>(rows: impl Iterator<Item = (Variant, &'a str, usize, f64)>) -> Vec<Cell> {
    let mut cells: Vec<Cell> = Vec::new();
    for (variant, problem, dim, error) in rows {
        match cells
            .iter_mut()
            .find(|c| c.variant == variant && c.problem == problem && c.dim == dim)
        {
            Some(c) => c.errors.push(error),
            None => cells.push(Cell {
                variant,
                problem: problem.to_string(),
                dim,
                errors: vec![error],
            }),
        }
    }
    cells
}
