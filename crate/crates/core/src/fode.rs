//! Fractional-order financial system and its parameter identification.
//!
//! The system, with Caputo derivatives of orders `(q1, q2, q3)`:
//!
//! ```text
//! D^q1 x = z + (y − a)·x
//! D^q2 y = 1 − b·y − x²
//! D^q3 z = −x − c·z
//! ```
//!
//! It is integrated with an explicit Grünwald–Letnikov scheme with full
//! memory. The memory sum runs over deviations from the initial state, which
//! is what makes the scheme Caputo rather than Riemann–Liouville; at order 1
//! it is forward Euler.

use serde::{Deserialize, Serialize};

use crate::cuckoo::{self, CsConfig, Objective, RunRecord, Variant};
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::scalar::{fmt17, Scalar};

/// Objective value reported for a candidate whose simulation diverges.
pub const DIVERGENCE_SENTINEL: f64 = 1e12;

/// Grünwald–Letnikov weights `c_0 .. c_{count-1}` for order `q`.
pub fn gl_coefficients<T: Scalar>(q: T, count: usize) -> Vec<T> {
    let mut c = Vec::with_capacity(count);
    if count == 0 {
        return c;
    }
    c.push(T::one());
    for j in 1..count {
        let prev = c[j - 1];
        c.push((T::one() - (T::one() + q) / T::from_usize(j)) * prev);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinancialSystem<T> {
    pub q1: T,
    pub q2: T,
    pub q3: T,
    pub a: T,
    pub b: T,
    pub c: T,
    pub x0: T,
    pub y0: T,
    pub z0: T,
    pub h: T,
    pub n: usize,
}

impl<T: Scalar> FinancialSystem<T> {
    /// Orders (1, 0.95, 0.99), parameters (1, 0.1, 1), start (2, −1, 1),
    /// `h = 0.005`, 200 steps.
    pub fn reference() -> Self {
        let l = T::lit;
        Self {
            q1: l(1.0),
            q2: l(0.95),
            q3: l(0.99),
            a: l(1.0),
            b: l(0.1),
            c: l(1.0),
            x0: l(2.0),
            y0: l(-1.0),
            z0: l(1.0),
            h: l(0.005),
            n: 200,
        }
    }

    pub fn params(&self) -> [T; 3] {
        [self.a, self.b, self.c]
    }

    pub fn with_params(&self, [a, b, c]: [T; 3]) -> Self {
        Self { a, b, c, ..self.clone() }
    }

    pub fn orders(&self) -> [T; 3] {
        [self.q1, self.q2, self.q3]
    }

    pub fn initial_state(&self) -> [T; 3] {
        [self.x0, self.y0, self.z0]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > T::zero()) || !self.h.is_finite() {
            return Err(Error::InvalidConfig("step size must be positive".into()));
        }
        for (name, q) in ["q1", "q2", "q3"].into_iter().zip(self.orders()) {
            if !(q > T::zero() && q <= T::one()) {
                return Err(Error::Domain {
                    param: name,
                    value: q.as_f64(),
                    domain: "(0, 1]",
                });
            }
        }
        Ok(())
    }

    /// Right-hand side of the system at `s`.
    pub fn rhs(&self, [x, y, z]: [T; 3]) -> [T; 3] {
        [z + (y - self.a) * x, T::one() - self.b * y - x * x, -x - self.c * z]
    }
}

/// Simulated states, the initial state first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub h: T,
    pub states: Vec<[T; 3]>,
}

impl<T: Scalar> Trajectory<T> {
    /// CSV with header `t,x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z\n");
        for (k, s) in self.states.iter().enumerate() {
            let t = self.h * T::from_usize(k);
            out.push_str(&format!("{},{},{},{}\n", fmt17(t), fmt17(s[0]), fmt17(s[1]), fmt17(s[2])));
        }
        out
    }
}

/// Weights and `h^q` per component, reusable across simulations that share
/// orders, step size and horizon.
#[derive(Clone, Debug)]
struct Memory<T> {
    coef: [Vec<T>; 3],
    hq: [T; 3],
}

impl<T: Scalar> Memory<T> {
    fn new(sys: &FinancialSystem<T>) -> Self {
        let q = sys.orders();
        let len = sys.n + 1;
        Self {
            coef: q.map(|q| gl_coefficients(q, len)),
            hq: q.map(|q| sys.h.powf(q)),
        }
    }
}

pub fn simulate<T: Scalar>(system: &FinancialSystem<T>) -> Result<Trajectory<T>> {
    system.validate()?;
    simulate_with(system, &Memory::new(system))
}

fn simulate_with<T: Scalar>(sys: &FinancialSystem<T>, mem: &Memory<T>) -> Result<Trajectory<T>> {
    let start = sys.initial_state();
    let mut states = Vec::with_capacity(sys.n + 1);
    states.push(start);
    // dev[k][i] = state_k[i] − start[i]; dev[0] is zero.
    let mut dev: Vec<[T; 3]> = Vec::with_capacity(sys.n + 1);
    dev.push([T::zero(); 3]);
    for k in 1..=sys.n {
        let f = sys.rhs(states[k - 1]);
        let mut next = [T::zero(); 3];
        for i in 0..3 {
            let c = &mem.coef[i];
            let mut hist = T::zero();
            for j in 1..k {
                hist += c[j] * dev[k - j][i];
            }
            let d = f[i] * mem.hq[i] - hist;
            next[i] = d;
        }
        let state = [next[0] + start[0], next[1] + start[1], next[2] + start[2]];
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::SimulationDiverged { step: k });
        }
        dev.push(next);
        states.push(state);
    }
    Ok(Trajectory { h: sys.h, states })
}

/// Identification of `(a, b, c)` from an observed trajectory.
#[derive(Clone, Debug)]
pub struct IdentificationTask<T> {
    /// Orders, initial state, step and horizon; its `(a, b, c)` are the truth
    /// when `truth` is set.
    pub system: FinancialSystem<T>,
    pub observed: Trajectory<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub truth: Option<[T; 3]>,
    memory: Memory<T>,
}

impl<T: Scalar> IdentificationTask<T> {
    /// Observes `system` itself; its parameters become the known truth.
    /// Bounds default to `[0,2] × [0,1] × [0,2]`.
    pub fn from_system(system: FinancialSystem<T>) -> Result<Self> {
        system.validate()?;
        let memory = Memory::new(&system);
        let observed = simulate_with(&system, &memory)?;
        let l = T::lit;
        Ok(Self {
            truth: Some(system.params()),
            system,
            observed,
            lower: vec![l(0.0), l(0.0), l(0.0)],
            upper: vec![l(2.0), l(1.0), l(2.0)],
            memory,
        })
    }

    pub fn reference() -> Result<Self> {
        Self::from_system(FinancialSystem::reference())
    }

    pub fn with_bounds(mut self, lower: [T; 3], upper: [T; 3]) -> Result<Self> {
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidConfig("each lower bound must be below its upper bound".into()));
        }
        self.lower = lower.to_vec();
        self.upper = upper.to_vec();
        Ok(self)
    }
}

/// Sum of squared state errors over steps `1..=n`, or
/// [`DIVERGENCE_SENTINEL`] if the candidate simulation blows up.
pub fn identification_objective<T: Scalar>(candidate: [T; 3], task: &IdentificationTask<T>) -> T {
    let sys = task.system.with_params(candidate);
    let sentinel = T::lit(DIVERGENCE_SENTINEL);
    let Ok(sim) = simulate_with(&sys, &task.memory) else {
        return sentinel;
    };
    let mut total = T::zero();
    for (s, o) in sim.states.iter().zip(&task.observed.states).skip(1) {
        for i in 0..3 {
            total += (s[i] - o[i]).squared();
        }
    }
    if total.is_finite() {
        total.min(sentinel)
    } else {
        sentinel
    }
}

impl<T: Scalar> Objective<T> for IdentificationTask<T> {
    fn dim(&self) -> usize {
        3
    }
    fn lower(&self) -> &[T] {
        &self.lower
    }
    fn upper(&self) -> &[T] {
        &self.upper
    }
    fn value(&self, x: &[T]) -> T {
        identification_objective([x[0], x[1], x[2]], self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifyOptions {
    pub np: usize,
    /// Generations; each costs `2·np` evaluations.
    pub iterations: u64,
    /// Place the truth in the initial population.
    pub inject_truth: bool,
}

impl Default for IdentifyOptions {
    fn default() -> Self {
        Self {
            np: 40,
            iterations: 200,
            inject_truth: false,
        }
    }
}

impl IdentifyOptions {
    pub fn max_fes(&self) -> u64 {
        self.np as u64 + self.iterations * 2 * self.np as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Identification<T> {
    pub variant: Variant,
    pub seed: u64,
    pub estimate: [T; 3],
    pub objective: T,
    /// `|θ̂ − θ| / |θ|` per parameter, when the truth is known.
    pub relative_errors: Option<[T; 3]>,
    /// Best objective among the initial population.
    pub initial_best: T,
    pub record: RunRecord<T>,
}

pub fn identify<T: Scalar>(
    task: &IdentificationTask<T>,
    variant: Variant,
    seed: u64,
    options: IdentifyOptions,
) -> Result<Identification<T>> {
    let mut config = CsConfig::new(options.np, variant.spec(), options.max_fes(), variant.stream_seed(seed));
    config.checkpoint_stride = Some(options.np as u64);
    let injected: Vec<Vec<T>> = match (options.inject_truth, task.truth) {
        (true, Some(t)) => vec![t.to_vec()],
        (true, None) => return Err(Error::InvalidConfig("truth injection needs a known truth".into())),
        (false, _) => Vec::new(),
    };
    let mut src = RandomStream::new(config.seed);
    let record = cuckoo::run_with_source(task, &config, &mut src, &injected)?;
    let p = &record.final_best.position;
    let estimate = [p[0], p[1], p[2]];
    let relative_errors = task
        .truth
        .map(|t| [0, 1, 2].map(|i| (estimate[i] - t[i]).abs() / t[i].abs()));
    Ok(Identification {
        variant,
        seed,
        estimate,
        objective: record.final_best.fitness,
        relative_errors,
        initial_best: record.trajectory[0].best_fitness,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn euler(sys: &FinancialSystem<f64>) -> Vec<[f64; 3]> {
        let mut s = [sys.x0, sys.y0, sys.z0];
        let mut out = vec![s];
        for _ in 0..sys.n {
            let [x, y, z] = s;
            s = [
                x + sys.h * (z + (y - sys.a) * x),
                y + sys.h * (1.0 - sys.b * y - x * x),
                z + sys.h * (-x - sys.c * z),
            ];
            out.push(s);
        }
        out
    }

    #[test]
    fn coefficient_examples() {
        let c = gl_coefficients(0.95_f64, 3);
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1], -0.95, epsilon = 1e-12);
        assert_abs_diff_eq!(c[2], -0.02375, epsilon = 1e-12);
        let c = gl_coefficients(0.99_f64, 3);
        assert_abs_diff_eq!(c[1], -0.99, epsilon = 1e-12);
        assert_abs_diff_eq!(c[2], -0.00495, epsilon = 1e-12);
        assert_eq!(gl_coefficients(1.0_f64, 5), vec![1.0, -1.0, 0.0, 0.0, 0.0]);
        assert!(gl_coefficients(0.5_f64, 0).is_empty());
    }

    #[test]
    fn coefficients_alternate_and_partial_sums_stay_in_unit_interval() {
        for q in [0.05, 0.3, 0.5, 0.8, 0.95, 0.99] {
            let c = gl_coefficients(q, 500);
            assert!(c[0] > 0.0);
            let mut sum = c[0];
            for &cj in &c[1..] {
                assert!(cj < 0.0, "q = {q}");
                sum += cj;
                assert!(sum > 0.0 && sum < 1.0, "q = {q}, sum = {sum}");
            }
        }
    }

    #[test]
    fn unit_orders_match_euler() {
        let sys = FinancialSystem {
            q1: 1.0,
            q2: 1.0,
            q3: 1.0,
            ..FinancialSystem::reference()
        };
        let got = simulate(&sys).unwrap();
        let want = euler(&sys);
        assert_eq!(got.states.len(), 201);
        for (g, w) in got.states.iter().zip(&want) {
            for i in 0..3 {
                assert_abs_diff_eq!(g[i], w[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_steps_returns_initial_state() {
        let sys = FinancialSystem { n: 0, ..FinancialSystem::<f64>::reference() };
        assert_eq!(simulate(&sys).unwrap().states, vec![[2.0, -1.0, 1.0]]);
    }

    #[test]
    fn reference_trajectory_is_bounded_and_deterministic() {
        let sys = FinancialSystem::<f64>::reference();
        let a = simulate(&sys).unwrap();
        let b = simulate(&sys).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.states.len(), 201);
        assert!(a.states.iter().flatten().all(|v| v.is_finite() && v.abs() <= 1e3));
    }

    #[test]
    fn invalid_systems_are_rejected() {
        let r = FinancialSystem::<f64>::reference();
        assert!(simulate(&FinancialSystem { h: 0.0, ..r.clone() }).is_err());
        assert!(simulate(&FinancialSystem { q2: 0.0, ..r.clone() }).is_err());
        assert!(simulate(&FinancialSystem { q3: 1.2, ..r }).is_err());
    }

    #[test]
    fn divergence_reports_step() {
        let sys = FinancialSystem {
            x0: 1e150,
            ..FinancialSystem::<f64>::reference()
        };
        match simulate(&sys) {
            Err(Error::SimulationDiverged { step }) => assert!(step >= 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn objective_floor_at_truth() {
        let task = IdentificationTask::<f64>::reference().unwrap();
        assert_eq!(identification_objective([1.0, 0.1, 1.0], &task), 0.0);
        assert!(identification_objective([1.1, 0.1, 1.0], &task) > 0.0);
        for da in [-1e-3, 0.0, 1e-3] {
            for db in [-1e-3, 0.0, 1e-3] {
                for dc in [-1e-3, 0.0, 1e-3] {
                    let f = identification_objective([1.0 + da, 0.1 + db, 1.0 + dc], &task);
                    if (da, db, dc) == (0.0, 0.0, 0.0) {
                        assert_eq!(f, 0.0);
                    } else {
                        assert!(f > 0.0, "({da}, {db}, {dc})");
                    }
                }
            }
        }
    }

    #[test]
    fn truth_beats_every_box_vertex() {
        let task = IdentificationTask::<f64>::reference().unwrap();
        let truth = identification_objective([1.0, 0.1, 1.0], &task);
        for a in [0.0, 2.0] {
            for b in [0.0, 1.0] {
                for c in [0.0, 2.0] {
                    assert!(identification_objective([a, b, c], &task) > truth);
                }
            }
        }
    }

    #[test]
    fn diverging_candidate_gets_sentinel() {
        let task = IdentificationTask::<f64>::reference()
            .unwrap()
            .with_bounds([-1e3; 3], [1e3; 3])
            .unwrap();
        let sys = task.system.with_params([-1e3, -1e3, -1e3]);
        assert!(matches!(simulate(&sys), Err(Error::SimulationDiverged { .. })));
        assert_eq!(identification_objective([-1e3, -1e3, -1e3], &task), DIVERGENCE_SENTINEL);
    }

    #[test]
    fn budget_of_np_returns_best_initial_sample() {
        let task = IdentificationTask::<f64>::reference().unwrap();
        let opts = IdentifyOptions {
            np: 10,
            iterations: 0,
            inject_truth: false,
        };
        let out = identify(&task, Variant::Csp, 3, opts).unwrap();
        assert_eq!(out.record.fes_used, 10);
        assert_eq!(out.objective, out.initial_best);

        let cfg = CsConfig::new(10, Variant::Csp.spec(), 10, Variant::Csp.stream_seed(3));
        let mut src = RandomStream::new(cfg.seed);
        let init = cuckoo::initialize(&task, &cfg, &mut src);
        let best = init.iter().map(|n| n.fitness).fold(f64::INFINITY, f64::min);
        assert_eq!(out.objective, best);
    }

    #[test]
    fn injected_truth_is_kept() {
        let task = IdentificationTask::<f64>::reference().unwrap();
        let opts = IdentifyOptions {
            np: 10,
            iterations: 3,
            inject_truth: true,
        };
        let out = identify(&task, Variant::Cs, 1, opts).unwrap();
        assert_eq!(out.objective, 0.0);
        assert_eq!(out.estimate, [1.0, 0.1, 1.0]);
        assert_eq!(out.relative_errors, Some([0.0; 3]));
    }

    #[test]
    fn default_budget_is_sixteen_thousand_forty() {
        assert_eq!(IdentifyOptions::default().max_fes(), 16_040);
    }

    #[test]
    fn csv_has_time_column() {
        let sys = FinancialSystem { n: 2, ..FinancialSystem::<f64>::reference() };
        let csv = simulate(&sys).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x,y,z");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("5.0000000000000001e-3,"));
    }
}
