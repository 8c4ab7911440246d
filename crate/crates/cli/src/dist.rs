//! Raw draws from a step distribution.

use htcs::htdist::{DistKind, DistributionSpec};
use htcs::{fmt17, RandomStream};

/// `n` draws, one per line, from a stream seeded with `seed`.
pub fn sample_lines(spec: &DistributionSpec<f64>, n: usize, seed: u64) -> anyhow::Result<String> {
    let sampler = spec.sampler()?;
    let mut src = RandomStream::new(seed);
    let mut out = String::with_capacity(n * 24);
    for _ in 0..n {
        out.push_str(&fmt17(sampler.draw(&mut src)));
        out.push('\n');
    }
    Ok(out)
}

/// The tuned parameters of each law, used when a parameter is not given.
pub fn default_params(kind: DistKind) -> (f64, f64) {
    match kind {
        DistKind::Levy => (1.5, 0.0),
        DistKind::MittagLeffler => (0.8, 4.5),
        DistKind::Pareto => (1.5, 4.5),
        DistKind::Cauchy => (0.8, 4.5),
        DistKind::Weibull => (0.3, 4.0),
    }
}
