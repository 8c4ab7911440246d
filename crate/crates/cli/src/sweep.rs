//! Parameter grids over a variant's step distribution.

use std::str::FromStr;

use anyhow::{bail, Context};
use htcs::bench::{build, FunctionId, SuiteManifest};
use htcs::cuckoo::{run, CsConfig};
use htcs::htdist::DistributionSpec;
use htcs::{fmt17, Variant};
use rayon::prelude::*;

use crate::config::{MaxFesRule, NpRule};
use crate::store::pool;

/// Grid values along one axis: `start:stop:step` (inclusive) or `a,b,c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step): (f64, f64, f64) =
                    (start.trim().parse()?, stop.trim().parse()?, step.trim().parse()?);
                if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
                    bail!("grid `{s}` needs start <= stop and a positive step");
                }
                // Index-based so that 0.1:0.9:0.1 yields exactly nine points.
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
            [list] => list
                .split(',')
                .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad grid value `{v}`")))
                .collect::<anyhow::Result<Vec<_>>>()?,
            _ => bail!("grid `{s}` must be start:stop:step or a comma list"),
        };
        if values.iter().any(|v| !v.is_finite()) {
            bail!("grid `{s}` has non-finite values");
        }
        Ok(Grid(values))
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub variant: Variant,
    pub p1: Grid,
    /// Ignored for Lévy steps, which have one parameter.
    pub p2: Grid,
    pub problems: Vec<FunctionId>,
    pub dim: usize,
    pub repeats: u32,
    pub max_fes: MaxFesRule,
    pub np: NpRule,
    pub base_seed: u64,
}

impl SweepSpec {
    /// Defaults: sphere and Ackley at D = 30, 15 repeats.
    pub fn new(variant: Variant, p1: Grid, p2: Grid) -> Self {
        Self {
            variant,
            p1,
            p2,
            problems: vec![FunctionId::Sphere, FunctionId::Ackley],
            dim: 30,
            repeats: 15,
            max_fes: MaxFesRule::default(),
            np: NpRule::default(),
            base_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub problem: FunctionId,
    pub mean_error: f64,
}

/// Mean final error per grid cell and problem, in (p1, p2, problem) order.
pub fn sweep(spec: &SweepSpec, jobs: usize) -> anyhow::Result<Vec<SweepRow>> {
    if spec.repeats == 0 {
        bail!("repeats must be at least 1");
    }
    let base = spec.variant.spec::<f64>();
    let p2_values = if base.kind == htcs::DistKind::Levy { vec![base.p2] } else { spec.p2.0.clone() };
    let manifest = SuiteManifest::default();
    let problems = spec
        .problems
        .iter()
        .map(|&id| build::<f64>(id, spec.dim, &manifest))
        .collect::<Result<Vec<_>, _>>()?;

    let mut cells = Vec::new();
    for &p1 in &spec.p1.0 {
        for &p2 in &p2_values {
            let dist = DistributionSpec::new(base.kind, p1, p2).with_symmetrize(base.symmetrize);
            dist.validate().with_context(|| format!("grid point ({p1}, {p2})"))?;
            for problem in &problems {
                cells.push((p1, p2, dist, problem));
            }
        }
    }
    let np = spec.np.resolve(spec.dim);
    let max_fes = spec.max_fes.resolve(spec.dim);
    pool(jobs)?.install(|| {
        cells
            .par_iter()
            .map(|&(p1, p2, dist, problem)| {
                let mut total = 0.0;
                for r in 0..spec.repeats {
                    let seed = spec.variant.stream_seed(spec.base_seed + u64::from(r));
                    let record = run(problem, &CsConfig::new(np, dist, max_fes, seed))?;
                    total += problem.error_of(record.final_best.fitness);
                }
                Ok(SweepRow {
                    p1,
                    p2,
                    problem: problem.id,
                    mean_error: total / f64::from(spec.repeats),
                })
            })
            .collect()
    })
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p1,p2,problem,mean_error\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", fmt17(r.p1), fmt17(r.p2), r.problem, fmt17(r.mean_error)));
    }
    out
}
