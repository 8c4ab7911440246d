//! Cuckoo search with a pluggable global-walk distribution.
//!
//! One generation is two sweeps over the population:
//!
//! 1. global walk, `U = X + α · d ⊙ (X − X_best)`, with `d` a vector of
//!    independent draws from the configured law;
//! 2. local walk, `U = X + r · H(pa − ε) ⊙ (X_j − X_k)`, with partners `j ≠ k`
//!    drawn fresh for every individual. By default `r` is one draw per move
//!    and the gate is drawn per coordinate; see [`LocalWalkMode`].
//!
//! Every candidate is clamped to the box, evaluated once and kept only if it
//! is strictly better than the incumbent. `X_best` is refreshed after each
//! sweep. The run stops on the evaluation that reaches `max_fes`, even in the
//! middle of a sweep.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bench::BenchmarkProblem;
use crate::error::{Error, Result};
use crate::htdist::{DistributionSpec, StepSampler};
use crate::rng::{DrawSource, RandomStream};
use crate::scalar::Scalar;

/// A box-bounded objective the engine can minimize.
pub trait Objective<T> {
    fn dim(&self) -> usize;
    fn lower(&self) -> &[T];
    fn upper(&self) -> &[T];
    /// Objective value; `x.len() == self.dim()` is guaranteed by the engine.
    fn value(&self, x: &[T]) -> T;
}

impl<T: Scalar> Objective<T> for BenchmarkProblem<T> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn lower(&self) -> &[T] {
        &self.lower
    }
    fn upper(&self) -> &[T] {
        &self.upper
    }
    fn value(&self, x: &[T]) -> T {
        self.eval_unchecked(x)
    }
}

/// The five algorithm variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Cs,
    Csml,
    Csp,
    Csc,
    Csw,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Cs, Variant::Csml, Variant::Csp, Variant::Csc, Variant::Csw];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Cs => "cs",
            Variant::Csml => "csml",
            Variant::Csp => "csp",
            Variant::Csc => "csc",
            Variant::Csw => "csw",
        }
    }

    /// Display label, e.g. `CSML`.
    pub fn label(self) -> String {
        self.name().to_uppercase()
    }

    /// Stream seed for run seed `run_seed` of this variant.
    ///
    /// Variants sharing a run index get unrelated streams; the offset is the
    /// first eight bytes of the SHA-256 of the variant name.
    pub fn stream_seed(self, run_seed: u64) -> u64 {
        let digest = Sha256::digest(self.name().as_bytes());
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(head).wrapping_add(run_seed)
    }

    /// The tuned step distribution of this variant.
    ///
    /// The one-sided laws (Mittag-Leffler, Pareto, Weibull) carry a random
    /// sign, so steps point towards or away from `X_best` with equal odds.
    pub fn spec<T: Scalar>(self) -> DistributionSpec<T> {
        let l = T::lit;
        let spec = match self {
            Variant::Cs => DistributionSpec::levy(l(1.5)),
            Variant::Csml => DistributionSpec::mittag_leffler(l(0.8), l(4.5)),
            Variant::Csp => DistributionSpec::pareto(l(1.5), l(4.5)),
            Variant::Csc => DistributionSpec::cauchy(l(0.8), l(4.5)),
            Variant::Csw => DistributionSpec::weibull(l(0.3), l(4.0)),
        };
        spec.with_symmetrize(spec.kind.is_one_sided())
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

/// Step distribution for a variant name (`cs`, `csml`, `csp`, `csc`, `csw`).
pub fn make_variant<T: Scalar>(name: &str) -> Result<DistributionSpec<T>> {
    Ok(name.parse::<Variant>()?.spec())
}

/// How `r` and `ε` are drawn in the local walk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalWalkMode {
    /// One `r` per individual, an independent gate `H(pa − ε)` per coordinate.
    #[default]
    PerDimensionGate,
    /// One `(r, ε)` pair per individual.
    PerIndividual,
    /// An independent `(r, ε)` pair per coordinate.
    PerDimension,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsConfig<T> {
    pub np: usize,
    pub pa: T,
    pub alpha: T,
    pub dist: DistributionSpec<T>,
    pub max_fes: u64,
    pub seed: u64,
    /// Trajectory checkpoint spacing in evaluations; `None` means `np`.
    #[serde(default)]
    pub checkpoint_stride: Option<u64>,
    #[serde(default)]
    pub local_walk: LocalWalkMode,
}

impl<T: Scalar> CsConfig<T> {
    /// `pa = 0.25`, `α = 0.01`.
    pub fn new(np: usize, dist: DistributionSpec<T>, max_fes: u64, seed: u64) -> Self {
        Self {
            np,
            pa: T::lit(0.25),
            alpha: T::lit(0.01),
            dist,
            max_fes,
            seed,
            checkpoint_stride: None,
            local_walk: LocalWalkMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.np < 2 {
            return bad("population size must be at least 2");
        }
        if !(self.pa >= T::zero() && self.pa <= T::one()) {
            return bad("pa must lie in [0, 1]");
        }
        if !(self.alpha >= T::zero()) || !self.alpha.is_finite() {
            return bad("alpha must be a non-negative finite number");
        }
        if self.max_fes == 0 {
            return bad("max_fes must be positive");
        }
        if self.checkpoint_stride == Some(0) {
            return bad("checkpoint stride must be positive");
        }
        self.dist.validate()
    }

    /// Hex SHA-256 of the configuration with the seed zeroed.
    pub fn fingerprint(&self) -> String {
        let mut c = self.clone();
        c.seed = 0;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }

    fn stride(&self) -> u64 {
        self.checkpoint_stride.unwrap_or(self.np as u64)
    }
}

/// One candidate solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nest<T> {
    pub position: Vec<T>,
    pub fitness: T,
}

impl<T: Scalar> Nest<T> {
    pub fn evaluated(position: Vec<T>, problem: &impl Objective<T>) -> Self {
        let fitness = problem.value(&position);
        Self { position, fitness }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint<T> {
    pub fes: u64,
    pub best_fitness: T,
}

/// The outcome of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<T> {
    pub fingerprint: String,
    pub seed: u64,
    pub trajectory: Vec<Checkpoint<T>>,
    pub final_best: Nest<T>,
    pub fes_used: u64,
}

impl<T: Scalar> RunRecord<T> {
    /// Trajectory as CSV with header `fes,best_fitness`.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("fes,best_fitness\n");
        for c in &self.trajectory {
            out.push_str(&format!("{},{}\n", c.fes, crate::scalar::fmt17(c.best_fitness)));
        }
        out
    }
}

fn clamp_into<T: Scalar>(x: &mut [T], lower: &[T], upper: &[T]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.max(lo).min(hi);
    }
}

/// NP positions uniform in the box, each evaluated.
pub fn initialize<T: Scalar>(
    problem: &impl Objective<T>,
    config: &CsConfig<T>,
    src: &mut impl DrawSource,
) -> Vec<Nest<T>> {
    let (lower, upper) = (problem.lower(), problem.upper());
    (0..config.np)
        .map(|_| {
            let pos = lower
                .iter()
                .zip(upper)
                .map(|(&lo, &hi)| {
                    let u: T = src.uniform_open();
                    (lo + u * (hi - lo)).min(hi)
                })
                .collect();
            Nest::evaluated(pos, problem)
        })
        .collect()
}

/// Heavy-tailed move relative to the best nest, clamped to the box.
pub fn global_walk<T: Scalar>(
    nest: &Nest<T>,
    best: &Nest<T>,
    alpha: T,
    steps: &StepSampler<T>,
    problem: &impl Objective<T>,
    src: &mut impl DrawSource,
) -> Vec<T> {
    let mut u: Vec<T> = nest
        .position
        .iter()
        .zip(&best.position)
        .map(|(&x, &b)| x + alpha * steps.draw(src) * (x - b))
        .collect();
    clamp_into(&mut u, problem.lower(), problem.upper());
    u
}

/// Discovery-gated move along the difference of two partners, clamped.
///
/// `H(0) = 1`: a gate is open when `ε ≤ pa`. `r` is drawn before the gates.
pub fn local_walk<T: Scalar>(
    nest: &Nest<T>,
    partner_j: &Nest<T>,
    partner_k: &Nest<T>,
    config: &CsConfig<T>,
    problem: &impl Objective<T>,
    src: &mut impl DrawSource,
) -> Vec<T> {
    let partners = partner_j.position.iter().zip(&partner_k.position);
    let mut u: Vec<T> = match config.local_walk {
        LocalWalkMode::PerDimensionGate => {
            let r: T = src.uniform_open();
            nest.position
                .iter()
                .zip(partners)
                .map(|(&x, (&xj, &xk))| x + gate(config.pa, src) * r * (xj - xk))
                .collect()
        }
        LocalWalkMode::PerIndividual => {
            let r: T = src.uniform_open();
            let step = gate(config.pa, src) * r;
            nest.position
                .iter()
                .zip(partners)
                .map(|(&x, (&xj, &xk))| x + step * (xj - xk))
                .collect()
        }
        LocalWalkMode::PerDimension => nest
            .position
            .iter()
            .zip(partners)
            .map(|(&x, (&xj, &xk))| {
                let r: T = src.uniform_open();
                x + gate(config.pa, src) * r * (xj - xk)
            })
            .collect(),
    };
    clamp_into(&mut u, problem.lower(), problem.upper());
    u
}

/// `H(pa − ε)` for a fresh `ε`, with `H(0) = 1`.
fn gate<T: Scalar>(pa: T, src: &mut impl DrawSource) -> T {
    let eps: T = src.uniform_open();
    if pa - eps >= T::zero() {
        T::one()
    } else {
        T::zero()
    }
}

/// Evaluates `candidate` and keeps it only on strict improvement.
///
/// Returns the surviving nest and the number of evaluations spent (always 1).
pub fn greedy_select<T: Scalar>(
    current: Nest<T>,
    candidate: Vec<T>,
    problem: &impl Objective<T>,
) -> (Nest<T>, u64) {
    let challenger = Nest::evaluated(candidate, problem);
    if challenger.fitness < current.fitness {
        (challenger, 1)
    } else {
        (current, 1)
    }
}

/// Two partners `j ≠ k`, both different from `i` when the population allows.
fn pick_partners(i: usize, np: usize, src: &mut impl DrawSource) -> (usize, usize) {
    if np < 3 {
        let j = src.index_below(2);
        return (j, 1 - j);
    }
    let skip = |idx: usize, taken: &[usize]| {
        let mut idx = idx;
        let mut sorted = taken.to_vec();
        sorted.sort_unstable();
        for t in sorted {
            if idx >= t {
                idx += 1;
            }
        }
        idx
    };
    let j = skip(src.index_below(np - 1), &[i]);
    let k = skip(src.index_below(np - 2), &[i, j]);
    (j, k)
}

fn best_index<T: Scalar>(nests: &[Nest<T>]) -> usize {
    nests
        .iter()
        .enumerate()
        .fold(0, |b, (i, n)| if n.fitness < nests[b].fitness { i } else { b })
}

struct Tracker<T> {
    fes: u64,
    max_fes: u64,
    stride: u64,
    running_best: T,
    trajectory: Vec<Checkpoint<T>>,
}

impl<T: Scalar> Tracker<T> {
    fn tick(&mut self, fitness: T) {
        self.fes += 1;
        if fitness < self.running_best {
            self.running_best = fitness;
        }
        if self.fes % self.stride == 0 {
            self.trajectory.push(Checkpoint {
                fes: self.fes,
                best_fitness: self.running_best,
            });
        }
    }

    fn exhausted(&self) -> bool {
        self.fes >= self.max_fes
    }
}

/// Runs the optimizer with a stream seeded from `config.seed`.
pub fn run<T: Scalar>(problem: &impl Objective<T>, config: &CsConfig<T>) -> Result<RunRecord<T>> {
    let mut src = RandomStream::new(config.seed);
    run_with_source(problem, config, &mut src, &[])
}

/// Runs the optimizer on an explicit draw source.
///
/// `injected` positions replace the first initial nests after random
/// initialization (they are clamped and evaluated like any other nest).
pub fn run_with_source<T: Scalar>(
    problem: &impl Objective<T>,
    config: &CsConfig<T>,
    src: &mut impl DrawSource,
    injected: &[Vec<T>],
) -> Result<RunRecord<T>> {
    config.validate()?;
    let dim = problem.dim();
    if let Some(bad) = injected.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }
    if injected.len() > config.np {
        return Err(Error::InvalidConfig("more injected nests than the population".into()));
    }
    let steps = config.dist.sampler()?;
    let np = config.np;

    let mut nests = initialize(problem, config, src);
    for (nest, pos) in nests.iter_mut().zip(injected) {
        let mut pos = pos.clone();
        clamp_into(&mut pos, problem.lower(), problem.upper());
        *nest = Nest::evaluated(pos, problem);
    }

    let mut best = nests[best_index(&nests)].clone();
    let mut tr = Tracker {
        fes: 0,
        max_fes: config.max_fes,
        stride: config.stride(),
        running_best: best.fitness,
        trajectory: Vec::new(),
    };
    // Initialization counts as NP evaluations, even past the budget.
    for _ in 0..np {
        tr.fes += 1;
        if tr.fes % tr.stride == 0 {
            tr.trajectory.push(Checkpoint {
                fes: tr.fes,
                best_fitness: best.fitness,
            });
        }
    }

    'outer: while !tr.exhausted() {
        for i in 0..np {
            let cand = global_walk(&nests[i], &best, config.alpha, &steps, problem, src);
            let incumbent = std::mem::replace(&mut nests[i], Nest { position: Vec::new(), fitness: T::zero() });
            let (survivor, _) = greedy_select(incumbent, cand, problem);
            tr.tick(survivor.fitness);
            nests[i] = survivor;
            if tr.exhausted() {
                break 'outer;
            }
        }
        refresh_best(&nests, &mut best);

        for i in 0..np {
            let (j, k) = pick_partners(i, np, src);
            let cand = local_walk(&nests[i], &nests[j], &nests[k], config, problem, src);
            let incumbent = std::mem::replace(&mut nests[i], Nest { position: Vec::new(), fitness: T::zero() });
            let (survivor, _) = greedy_select(incumbent, cand, problem);
            tr.tick(survivor.fitness);
            nests[i] = survivor;
            if tr.exhausted() {
                break 'outer;
            }
        }
        refresh_best(&nests, &mut best);
    }
    refresh_best(&nests, &mut best);

    if tr.trajectory.last().map(|c| c.fes) != Some(tr.fes) {
        tr.trajectory.push(Checkpoint {
            fes: tr.fes,
            best_fitness: tr.running_best,
        });
    }

    Ok(RunRecord {
        fingerprint: config.fingerprint(),
        seed: config.seed,
        trajectory: tr.trajectory,
        final_best: best,
        fes_used: tr.fes,
    })
}

fn refresh_best<T: Scalar>(nests: &[Nest<T>], best: &mut Nest<T>) {
    let i = best_index(nests);
    if nests[i].fitness < best.fitness {
        *best = nests[i].clone();
    }
}
