//! Heavy-tailed step-length distributions.
//!
//! Five laws can drive the global walk of the optimizer:
//!
//! | kind            | `p1`          | `p2`         | generator                              |
//! |-----------------|---------------|--------------|----------------------------------------|
//! | `Levy`          | λ ∈ (0, 2]    | unused       | Mantegna: φ·μ / \|v\|^(1/λ), μ, v ~ N(0,1) |
//! | `MittagLeffler` | β ∈ (0, 1]    | γ > 0        | Kozubowski–Rachev: −γ ln u · B(β, v)^(1/β) |
//! | `Pareto`        | a > 0         | b > 0        | b (1 − u)^(−1/a)                       |
//! | `Cauchy`        | μ             | σ > 0        | μ + (σ/2) tan(π (u − ½))               |
//! | `Weibull`       | ξ > 0         | κ > 0        | κ (−ln u)^(1/ξ)                        |
//!
//! Mittag-Leffler, Pareto and Weibull are one-sided. Setting
//! [`DistributionSpec::symmetrize`] attaches an independent fair sign to those
//! draws; it leaves the two-sided laws untouched.
//!
//! The Cauchy law uses the CDF `F(x) = atan(2 (x − μ) / σ) / π + ½`, so its
//! half-width at the quartiles is σ/2 rather than σ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::DrawSource;
use crate::scalar::Scalar;
use crate::special::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistKind {
    Levy,
    MittagLeffler,
    Pareto,
    Cauchy,
    Weibull,
}

impl DistKind {
    /// Laws whose raw draws are never negative.
    pub fn is_one_sided(self) -> bool {
        matches!(
            self,
            DistKind::MittagLeffler | DistKind::Pareto | DistKind::Weibull
        )
    }
}

/// Which law drives the global walk, with its two parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec<T> {
    pub kind: DistKind,
    pub p1: T,
    pub p2: T,
    #[serde(default)]
    pub symmetrize: bool,
}

impl<T: Scalar> DistributionSpec<T> {
    pub fn new(kind: DistKind, p1: T, p2: T) -> Self {
        Self {
            kind,
            p1,
            p2,
            symmetrize: false,
        }
    }

    pub fn levy(lambda: T) -> Self {
        Self::new(DistKind::Levy, lambda, T::zero())
    }

    pub fn mittag_leffler(beta: T, gamma: T) -> Self {
        Self::new(DistKind::MittagLeffler, beta, gamma)
    }

    pub fn pareto(a: T, b: T) -> Self {
        Self::new(DistKind::Pareto, a, b)
    }

    pub fn cauchy(mu: T, sigma: T) -> Self {
        Self::new(DistKind::Cauchy, mu, sigma)
    }

    pub fn weibull(xi: T, kappa: T) -> Self {
        Self::new(DistKind::Weibull, xi, kappa)
    }

    pub fn with_symmetrize(mut self, on: bool) -> Self {
        self.symmetrize = on;
        self
    }

    /// Checks the parameter domain of the selected law.
    pub fn validate(&self) -> Result<()> {
        let (p1, p2) = (self.p1, self.p2);
        let zero = T::zero();
        match self.kind {
            DistKind::Levy => check(p1 > zero && p1 <= T::two(), "lambda", p1, "(0, 2]"),
            DistKind::MittagLeffler => {
                check(p1 > zero && p1 <= T::one(), "beta", p1, "(0, 1]")?;
                check(p2 > zero, "gamma", p2, "(0, inf)")
            }
            DistKind::Pareto => {
                check(p1 > zero, "a", p1, "(0, inf)")?;
                check(p2 > zero, "b", p2, "(0, inf)")
            }
            DistKind::Cauchy => {
                check(p1.is_finite(), "mu", p1, "finite reals")?;
                check(p2 > zero, "sigma", p2, "(0, inf)")
            }
            DistKind::Weibull => {
                check(p1 > zero, "xi", p1, "(0, inf)")?;
                check(p2 > zero, "kappa", p2, "(0, inf)")
            }
        }
    }

    /// Precomputes the constants of the selected law.
    pub fn sampler(&self) -> Result<StepSampler<T>> {
        StepSampler::new(*self)
    }

    /// Closed-form CDF of the unsigned law, where one exists.
    ///
    /// Available for Pareto, Cauchy, Weibull and the exponential case (β = 1)
    /// of Mittag-Leffler. The symmetrize flag is ignored.
    pub fn cdf(&self, x: T) -> Option<T> {
        let (p1, p2) = (self.p1, self.p2);
        let zero = T::zero();
        match self.kind {
            DistKind::Pareto => Some(if x < p2 {
                zero
            } else {
                T::one() - (p2 / x).powf(p1)
            }),
            DistKind::Cauchy => Some((T::two() * (x - p1) / p2).atan() / T::PI() + T::half()),
            DistKind::Weibull => Some(if x <= zero {
                zero
            } else {
                -(-(x / p2).powf(p1)).exp_m1()
            }),
            DistKind::MittagLeffler if p1 == T::one() => Some(if x <= zero {
                zero
            } else {
                -(-x / p2).exp_m1()
            }),
            _ => None,
        }
    }

    /// Natural log of the survival function `P(X > x)`, where closed-form.
    pub fn ln_survival(&self, x: T) -> Option<T> {
        let (p1, p2) = (self.p1, self.p2);
        let zero = T::zero();
        match self.kind {
            DistKind::Pareto => Some(if x < p2 { zero } else { p1 * (p2 / x).ln() }),
            DistKind::Cauchy => {
                let z = T::two() * (x - p1) / p2;
                let tail = if z > zero {
                    z.recip().atan() / T::PI()
                } else {
                    T::half() - z.atan() / T::PI()
                };
                Some(tail.ln())
            }
            DistKind::Weibull => Some(if x <= zero { zero } else { -(x / p2).powf(p1) }),
            DistKind::MittagLeffler if p1 == T::one() => {
                Some(if x <= zero { zero } else { -x / p2 })
            }
            _ => None,
        }
    }
}

fn check<T: Scalar>(ok: bool, param: &'static str, value: T, domain: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            param,
            value: value.to_f64().unwrap_or(f64::NAN),
            domain,
        })
    }
}

/// Mantegna's scale factor
/// `φ = [Γ(1+λ) sin(πλ/2) / (Γ((1+λ)/2) λ 2^((λ−1)/2))]^(1/λ)`.
///
/// At λ = 2 the sine vanishes and φ = 0; the Lévy sampler rejects that value.
pub fn mantegna_phi<T: Scalar>(lambda: T) -> Result<T> {
    check(lambda > T::zero() && lambda <= T::two(), "lambda", lambda, "(0, 2]")?;
    if lambda == T::two() {
        return Ok(T::zero());
    }
    let one = T::one();
    let num = gamma(one + lambda) * (T::PI() * lambda / T::two()).sin();
    let den = gamma((one + lambda) / T::two()) * lambda * T::two().powf((lambda - one) / T::two());
    Ok((num / den).powf(lambda.recip()))
}

/// `φ μ / |v|^(1/λ)`, or `None` when the denominator underflows.
pub fn levy_from_normals<T: Scalar>(phi: T, lambda: T, mu: T, v: T) -> Option<T> {
    let den = v.abs().powf(lambda.recip());
    (den > T::zero()).then(|| phi * mu / den)
}

/// The Kozubowski–Rachev bracket `sin(βπ)/tan(βπv) − cos(βπ)`.
///
/// Returns `None` when `tan(βπv)` is zero or non-finite. For β = 1 the
/// bracket is exactly one.
pub fn mittag_leffler_bracket<T: Scalar>(beta: T, v: T) -> Option<T> {
    if beta == T::one() {
        return Some(T::one());
    }
    let bp = beta * T::PI();
    let t = (bp * v).tan();
    if t == T::zero() || !t.is_finite() {
        return None;
    }
    Some(bp.sin() / t - bp.cos())
}

/// `−γ ln u · bracket(β, v)^(1/β)`.
pub fn mittag_leffler_from_uniforms<T: Scalar>(beta: T, gamma: T, u: T, v: T) -> Option<T> {
    let bracket = mittag_leffler_bracket(beta, v)?;
    Some(-gamma * u.ln() * bracket.powf(beta.recip()))
}

/// Inverse of `F(x) = 1 − (b/x)^a`.
pub fn pareto_from_uniform<T: Scalar>(a: T, b: T, u: T) -> T {
    b * (T::one() - u).powf(-a.recip())
}

/// Inverse of `F(x) = atan(2 (x − μ)/σ)/π + ½`; `None` if the tangent overflows.
pub fn cauchy_from_uniform<T: Scalar>(mu: T, sigma: T, u: T) -> Option<T> {
    let t = (T::PI() * (u - T::half())).tan();
    t.is_finite().then(|| mu + sigma * T::half() * t)
}

/// Inverse of the tail function `e^(−(x/κ)^ξ)`.
pub fn weibull_from_uniform<T: Scalar>(xi: T, kappa: T, u: T) -> T {
    kappa * (-u.ln()).powf(xi.recip())
}

/// Draws one Lévy step via Mantegna's algorithm. Requires λ ∈ (0, 2).
pub fn sample_levy<T: Scalar, S: DrawSource>(lambda: T, src: &mut S) -> Result<T> {
    Ok(DistributionSpec::levy(lambda).sampler()?.draw(src))
}

pub fn sample_mittag_leffler<T: Scalar, S: DrawSource>(beta: T, gamma: T, src: &mut S) -> Result<T> {
    Ok(DistributionSpec::mittag_leffler(beta, gamma).sampler()?.draw(src))
}

pub fn sample_pareto<T: Scalar, S: DrawSource>(a: T, b: T, src: &mut S) -> Result<T> {
    Ok(DistributionSpec::pareto(a, b).sampler()?.draw(src))
}

pub fn sample_cauchy<T: Scalar, S: DrawSource>(mu: T, sigma: T, src: &mut S) -> Result<T> {
    Ok(DistributionSpec::cauchy(mu, sigma).sampler()?.draw(src))
}

pub fn sample_weibull<T: Scalar, S: DrawSource>(xi: T, kappa: T, src: &mut S) -> Result<T> {
    Ok(DistributionSpec::weibull(xi, kappa).sampler()?.draw(src))
}

/// One draw from `spec`. Builds a [`StepSampler`] each call; hot loops should
/// build it once instead.
pub fn sample<T: Scalar, S: DrawSource>(spec: &DistributionSpec<T>, src: &mut S) -> Result<T> {
    Ok(spec.sampler()?.draw(src))
}

/// Checks Definition-style heavy-tailedness against one exponential rate:
/// true iff `ln P(X > x) + λ x` is strictly increasing along `grid`.
pub fn tail_dominates_exponential<T: Scalar>(
    spec: &DistributionSpec<T>,
    lambda_exp: T,
    grid: &[T],
) -> Result<bool> {
    spec.validate()?;
    check(lambda_exp > T::zero(), "lambda_exp", lambda_exp, "(0, inf)")?;
    let well_formed = grid.len() >= 2
        && grid[0] > T::zero()
        && grid.windows(2).all(|w| w[1] > w[0]);
    if !well_formed {
        return Err(Error::InvalidGrid);
    }
    let h = grid
        .iter()
        .map(|&x| {
            spec.ln_survival(x)
                .map(|ls| ls + lambda_exp * x)
                .ok_or(Error::UnsupportedTail(spec.kind))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(h.windows(2).all(|w| w[1] > w[0]))
}

#[derive(Clone, Copy, Debug)]
enum Law<T> {
    Levy { phi: T, lambda: T },
    MittagLeffler { beta: T, gamma: T },
    Pareto { a: T, b: T },
    Cauchy { mu: T, sigma: T },
    Weibull { xi: T, kappa: T },
}

/// A validated spec with its constants ready for repeated draws.
#[derive(Clone, Copy, Debug)]
pub struct StepSampler<T> {
    spec: DistributionSpec<T>,
    law: Law<T>,
}

impl<T: Scalar> StepSampler<T> {
    pub fn new(spec: DistributionSpec<T>) -> Result<Self> {
        spec.validate()?;
        let (p1, p2) = (spec.p1, spec.p2);
        let law = match spec.kind {
            DistKind::Levy => {
                check(p1 < T::two(), "lambda", p1, "(0, 2) for sampling")?;
                Law::Levy {
                    phi: mantegna_phi(p1)?,
                    lambda: p1,
                }
            }
            DistKind::MittagLeffler => Law::MittagLeffler { beta: p1, gamma: p2 },
            DistKind::Pareto => Law::Pareto { a: p1, b: p2 },
            DistKind::Cauchy => Law::Cauchy { mu: p1, sigma: p2 },
            DistKind::Weibull => Law::Weibull { xi: p1, kappa: p2 },
        };
        Ok(Self { spec, law })
    }

    pub fn spec(&self) -> &DistributionSpec<T> {
        &self.spec
    }

    /// Draws one value. Retries internally on the measure-zero singular cases.
    pub fn draw<S: DrawSource>(&self, src: &mut S) -> T {
        let x = match self.law {
            Law::Levy { phi, lambda } => {
                let mu = src.standard_normal();
                loop {
                    if let Some(x) = levy_from_normals(phi, lambda, mu, src.standard_normal()) {
                        break x;
                    }
                }
            }
            Law::MittagLeffler { beta, gamma } => {
                let u: T = src.uniform_open();
                if beta == T::one() {
                    // The bracket is identically one; v is not needed.
                    -gamma * u.ln()
                } else {
                    loop {
                        if let Some(x) = mittag_leffler_from_uniforms(beta, gamma, u, src.uniform_open()) {
                            break x;
                        }
                    }
                }
            }
            Law::Pareto { a, b } => pareto_from_uniform(a, b, src.uniform_open()),
            Law::Cauchy { mu, sigma } => loop {
                if let Some(x) = cauchy_from_uniform(mu, sigma, src.uniform_open()) {
                    break x;
                }
            },
            Law::Weibull { xi, kappa } => weibull_from_uniform(xi, kappa, src.uniform_open()),
        };
        if self.spec.symmetrize && self.spec.kind.is_one_sided() {
            x * src.sign()
        } else {
            x
        }
    }
}
