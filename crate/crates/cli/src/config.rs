//! Experiment configuration as read from JSON.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use htcs::bench::FunctionId;
use htcs::Variant;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Evaluation budget per run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxFesRule {
    Fixed(u64),
    /// `k × D`.
    PerDimension(u64),
}

impl Default for MaxFesRule {
    fn default() -> Self {
        MaxFesRule::PerDimension(10_000)
    }
}

impl MaxFesRule {
    pub fn resolve(self, dim: usize) -> u64 {
        match self {
            MaxFesRule::Fixed(n) => n,
            MaxFesRule::PerDimension(k) => k * dim as u64,
        }
    }
}

impl fmt::Display for MaxFesRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxFesRule::Fixed(n) => write!(f, "{n}"),
            MaxFesRule::PerDimension(k) => write!(f, "{k}xD"),
        }
    }
}

impl FromStr for MaxFesRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_suffix("xD").or_else(|| s.strip_suffix("×D")) {
            let k = k.trim().parse().with_context(|| format!("bad budget rule `{s}`"))?;
            return Ok(MaxFesRule::PerDimension(k));
        }
        Ok(MaxFesRule::Fixed(s.parse().with_context(|| format!("bad budget `{s}`"))?))
    }
}

/// Population size per dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NpRule {
    Fixed(usize),
    /// `NP = D`, except `NP = 30` at `D = 10`.
    #[default]
    Paper,
}

impl NpRule {
    pub fn resolve(self, dim: usize) -> usize {
        match self {
            NpRule::Fixed(n) => n,
            NpRule::Paper if dim == 10 => 30,
            NpRule::Paper => dim,
        }
    }
}

impl fmt::Display for NpRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NpRule::Fixed(n) => write!(f, "{n}"),
            NpRule::Paper => f.write_str("paper"),
        }
    }
}

impl FromStr for NpRule {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.trim() {
            "paper" => Ok(NpRule::Paper),
            n => Ok(NpRule::Fixed(n.parse().with_context(|| format!("bad population size `{s}`"))?)),
        }
    }
}

/// Serializes a rule as its text form, or as a bare number when fixed.
macro_rules! text_or_number_serde {
    ($ty:ty, $fixed:path, $num:ty, $expect:literal) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                match self {
                    $fixed(n) => s.serialize_u64(*n as u64),
                    other => s.serialize_str(&other.to_string()),
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                struct V;
                impl Visitor<'_> for V {
                    type Value = $ty;
                    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        f.write_str($expect)
                    }
                    fn visit_u64<E: de::Error>(self, n: u64) -> Result<$ty, E> {
                        Ok($fixed(n as $num))
                    }
                    fn visit_str<E: de::Error>(self, s: &str) -> Result<$ty, E> {
                        s.parse().map_err(|e: anyhow::Error| E::custom(format!("{e:#}")))
                    }
                }
                d.deserialize_any(V)
            }
        }
    };
}

text_or_number_serde!(MaxFesRule, MaxFesRule::Fixed, u64, "a number or a rule like \"10000xD\"");
text_or_number_serde!(NpRule, NpRule::Fixed, usize, "a number or \"paper\"");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub dims: Vec<usize>,
    pub variants: Vec<Variant>,
    pub runs: u32,
    #[serde(default)]
    pub max_fes: MaxFesRule,
    #[serde(default)]
    pub np: NpRule,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Optional CEC data manifest; synthetic data otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_manifest: Option<PathBuf>,
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.problems.is_empty() || self.dims.is_empty() || self.variants.is_empty() {
            bail!("problems, dims and variants must be non-empty");
        }
        for p in &self.problems {
            p.parse::<FunctionId>()?;
        }
        if self.dims.contains(&0) {
            bail!("dimensions must be positive");
        }
        Ok(())
    }

    /// Problem names in canonical spelling.
    pub fn problem_ids(&self) -> anyhow::Result<Vec<FunctionId>> {
        Ok(self.problems.iter().map(|p| p.parse()).collect::<Result<_, _>>()?)
    }
}
