//! Variant comparison over a results store.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use htcs::stats::{Aggregate, ComparisonReport, ResultMatrix};
use htcs::Variant;

use crate::store::ResultsStore;

/// Final errors of one dimension as a matrix, algorithms labelled `CS`, `CSW`, ...
///
/// Runs are ordered by run index, so cells of different variants pair up.
pub fn result_matrix(store: &ResultsStore, dim: usize) -> anyhow::Result<ResultMatrix<f64>> {
    let manifest = store.manifest()?;
    let config = &manifest.config;
    let expected = config.runs as usize;
    let problems: Vec<String> = config.problem_ids()?.iter().map(|p| p.name().to_string()).collect();
    let cells = store.cells()?;
    let mut m = ResultMatrix::new(
        config.variants.iter().map(|v| v.label()).collect(),
        problems.clone(),
    );
    for (a, &variant) in config.variants.iter().enumerate() {
        for (p, problem) in problems.iter().enumerate() {
            let cell = cells
                .iter()
                .find(|c| c.variant == variant && &c.problem == problem && c.dim == dim);
            match cell {
                Some(c) if c.errors.len() == expected => m.set(a, p, c.errors.clone()),
                Some(c) => bail!(
                    "incomplete store: {variant} on {problem} at D={dim} has {} of {expected} runs",
                    c.errors.len()
                ),
                None => bail!("incomplete store: no runs for {variant} on {problem} at D={dim}"),
            }
        }
    }
    Ok(m)
}

/// Builds one report per dimension and writes `compare_D<dim>.{csv,txt}` into `out`.
pub fn compare(
    store: &ResultsStore,
    baseline: Variant,
    how: Aggregate,
    out: &Path,
) -> anyhow::Result<Vec<(usize, ComparisonReport, PathBuf)>> {
    let config = store.manifest()?.config;
    if config.variants.len() < 2 {
        bail!("comparison needs at least two variants, store has {}", config.variants.len());
    }
    if !config.variants.contains(&baseline) {
        bail!("baseline {baseline} is not in the store");
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut reports = Vec::new();
    for &dim in &config.dims {
        let m = result_matrix(store, dim)?;
        let report = ComparisonReport::build(&baseline.label(), &m, how)?;
        let csv = out.join(format!("compare_D{dim}.csv"));
        fs::write(&csv, report.to_csv())?;
        fs::write(out.join(format!("compare_D{dim}.txt")), report.to_text())?;
        reports.push((dim, report, csv));
    }
    Ok(reports)
}
