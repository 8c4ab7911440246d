//! Parameter identification of the fractional financial system.

use anyhow::bail;
use htcs::fode::{identification_objective, identify, Identification, IdentificationTask, IdentifyOptions};
use htcs::{fmt17, Variant};
use rayon::prelude::*;

use crate::store::{pool, CellSummary};

#[derive(Clone, Debug)]
pub struct IdentReport {
    pub variant: Variant,
    pub rows: Vec<Identification<f64>>,
}

/// One identification per seed, in seed order.
pub fn ident_run(
    task: &IdentificationTask<f64>,
    variant: Variant,
    seeds: &[u64],
    options: IdentifyOptions,
    jobs: usize,
) -> anyhow::Result<IdentReport> {
    if seeds.is_empty() {
        bail!("at least one seed is required");
    }
    let rows = pool(jobs)?.install(|| {
        seeds
            .par_iter()
            .map(|&s| identify(task, variant, s, options))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(IdentReport { variant, rows })
}

const HEADER: &str = "variant,seed,a,b,c,rel_err_a,rel_err_b,rel_err_c,objective,initial_best\n";

impl IdentReport {
    fn column(&self, f: impl Fn(&Identification<f64>) -> f64) -> CellSummary {
        CellSummary::of(&self.rows.iter().map(f).collect::<Vec<_>>())
    }

    /// Per-seed rows, then one `avg±std` row over all seeds.
    pub fn to_csv(&self) -> String {
        let rel = |r: &Identification<f64>, i: usize| r.relative_errors.map_or(f64::NAN, |e| e[i]);
        let mut out = String::from(HEADER);
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.variant,
                r.seed,
                fmt17(r.estimate[0]),
                fmt17(r.estimate[1]),
                fmt17(r.estimate[2]),
                fmt17(rel(r, 0)),
                fmt17(rel(r, 1)),
                fmt17(rel(r, 2)),
                fmt17(r.objective),
                fmt17(r.initial_best)
            ));
        }
        let pm = |s: CellSummary| format!("{}±{}", fmt17(s.mean), fmt17(s.std));
        let cols = [
            self.column(|r| r.estimate[0]),
            self.column(|r| r.estimate[1]),
            self.column(|r| r.estimate[2]),
            self.column(|r| rel(r, 0)),
            self.column(|r| rel(r, 1)),
            self.column(|r| rel(r, 2)),
            self.column(|r| r.objective),
            self.column(|r| r.initial_best),
        ];
        out.push_str(&format!("{},avg±std", self.variant));
        for c in cols {
            out.push(',');
            out.push_str(&pm(c));
        }
        out.push('\n');
        out
    }

    /// The objective's mean and sample standard deviation.
    pub fn objective_summary(&self) -> CellSummary {
        self.column(|r| r.objective)
    }
}

/// Which pair of parameters a landscape varies; the third stays at the truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axes {
    AB,
    AC,
    BC,
}

impl Axes {
    fn indices(self) -> (usize, usize) {
        match self {
            Axes::AB => (0, 1),
            Axes::AC => (0, 2),
            Axes::BC => (1, 2),
        }
    }
}

/// Objective on a `steps × steps` grid spanning the task bounds, CSV `p,q,objective`.
pub fn landscape(task: &IdentificationTask<f64>, axes: Axes, steps: usize) -> anyhow::Result<String> {
    let Some(truth) = task.truth else {
        bail!("a landscape needs a known truth for the fixed parameter");
    };
    if steps < 2 {
        bail!("a landscape needs at least two steps per axis");
    }
    let (i, j) = axes.indices();
    let at = |k: usize, s: usize| task.lower[k] + (task.upper[k] - task.lower[k]) * s as f64 / (steps - 1) as f64;
    let mut out = String::from("p,q,objective\n");
    for si in 0..steps {
        for sj in 0..steps {
            let mut c = truth;
            c[i] = at(i, si);
            c[j] = at(j, sj);
            let v = identification_objective(c, task);
            out.push_str(&format!("{},{},{}\n", fmt17(c[i]), fmt17(c[j]), fmt17(v)));
        }
    }
    Ok(out)
}
