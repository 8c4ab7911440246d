use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use htcs::fode::{simulate, FinancialSystem, IdentificationTask, IdentifyOptions};
use htcs::htdist::{DistKind, DistributionSpec};
use htcs::stats::Aggregate;
use htcs::{FunctionId, Variant};
use htcs_cli::config::{ExperimentConfig, MaxFesRule, NpRule};
use htcs_cli::ident::{ident_run, landscape, Axes};
use htcs_cli::sweep::{sweep, to_csv, Grid, SweepSpec};
use htcs_cli::{compare, dist, store, ResultsStore};

#[derive(Parser)]
#[command(name = "htcs", version, about = "Cuckoo search with heavy-tailed steps: experiments and tools")]
struct Cli {
    /// Base seed; run r of every cell uses seed + r.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Experiment config JSON for `bench run`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark runs and their comparison.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Mean error over a grid of distribution parameters.
    Sweep(SweepArgs),
    /// Draw from a step distribution.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Fractional financial system: identification and simulation.
    #[command(subcommand)]
    Ident(IdentCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run every (variant, problem, dim, run) and write a results store.
    Run(BenchRunArgs),
    /// Compare the variants of a results store against a baseline.
    Compare(CompareArgs),
}

#[derive(Args)]
struct BenchRunArgs {
    /// Problem names, e.g. F_sph,F_ras,F1.
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<Variant>>,
    #[arg(long)]
    runs: Option<u32>,
    /// Budget per run: a number or `<k>xD`.
    #[arg(long)]
    max_fes: Option<MaxFesRule>,
    /// Population size: a number or `paper`.
    #[arg(long)]
    np: Option<NpRule>,
    /// CEC data manifest; synthetic data otherwise.
    #[arg(long)]
    data_manifest: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Results store to read; defaults to --out, then `results`.
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long, default_value = "cs")]
    baseline: Variant,
    /// Aggregate runs by median instead of mean.
    #[arg(long)]
    median: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    variant: Variant,
    /// First parameter: `start:stop:step` or a comma list.
    #[arg(long)]
    p1: Grid,
    /// Second parameter, same syntax; ignored for `cs`.
    #[arg(long, default_value = "0")]
    p2: Grid,
    #[arg(long, value_delimiter = ',', default_values_t = [FunctionId::Sphere, FunctionId::Ackley])]
    problems: Vec<FunctionId>,
    #[arg(long, default_value_t = 30)]
    dim: usize,
    #[arg(long, default_value_t = 15)]
    repeats: u32,
    #[arg(long, default_value = "10000xD")]
    max_fes: MaxFesRule,
    #[arg(long, default_value = "paper")]
    np: NpRule,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistName {
    Levy,
    Ml,
    Pareto,
    Cauchy,
    Weibull,
}

impl From<DistName> for DistKind {
    fn from(d: DistName) -> Self {
        match d {
            DistName::Levy => DistKind::Levy,
            DistName::Ml => DistKind::MittagLeffler,
            DistName::Pareto => DistKind::Pareto,
            DistName::Cauchy => DistKind::Cauchy,
            DistName::Weibull => DistKind::Weibull,
        }
    }
}

#[derive(Subcommand)]
enum DistCommand {
    /// Print draws, one per line.
    Sample {
        #[arg(long)]
        dist: DistName,
        /// λ, β, a, μ or ξ; defaults to the tuned value.
        #[arg(long)]
        p1: Option<f64>,
        /// γ, b, σ or κ; defaults to the tuned value.
        #[arg(long)]
        p2: Option<f64>,
        /// Attach a random sign to one-sided draws.
        #[arg(long)]
        symmetrize: bool,
        #[arg(short, long, default_value_t = 10)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AxesArg {
    Ab,
    Ac,
    Bc,
}

#[derive(Subcommand)]
enum IdentCommand {
    /// Identify (a, b, c) of the reference system over several seeds.
    Run {
        #[arg(long, default_value = "csp")]
        variant: Variant,
        /// Number of seeds, starting at --seed.
        #[arg(long, default_value_t = 10)]
        runs: u64,
        #[arg(long, default_value_t = 40)]
        np: usize,
        #[arg(long, default_value_t = 200)]
        iterations: u64,
        /// Put the true parameters in the initial population.
        #[arg(long)]
        inject_truth: bool,
    },
    /// Simulate the reference system and print its trajectory.
    Simulate {
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Objective over a grid of two parameters, the third at its true value.
    Landscape {
        #[arg(long, value_enum, default_value = "ab")]
        axes: AxesArg,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
}

/// Writes `text` to `<out>/<name>` when --out is given, else to stdout.
fn emit(out: Option<&Path>, name: &str, text: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn bench_config(cli: &Cli, args: &BenchRunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExperimentConfig {
            problems: vec!["F_sph".into()],
            dims: vec![10],
            variants: vec![Variant::Cs],
            runs: 1,
            max_fes: MaxFesRule::default(),
            np: NpRule::default(),
            base_seed: 0,
            out: PathBuf::from("results"),
            data_manifest: None,
        },
    };
    if let Some(p) = &args.problems {
        config.problems = p.clone();
    }
    if let Some(d) = &args.dims {
        config.dims = d.clone();
    }
    if let Some(v) = &args.variants {
        config.variants = v.clone();
    }
    if let Some(r) = args.runs {
        config.runs = r;
    }
    if let Some(m) = args.max_fes {
        config.max_fes = m;
    }
    if let Some(n) = args.np {
        config.np = n;
    }
    if let Some(m) = &args.data_manifest {
        config.data_manifest = Some(m.clone());
    }
    if let Some(s) = cli.seed {
        config.base_seed = s;
    }
    if let Some(o) = &cli.out {
        config.out = o.clone();
    }
    config.validate()?;
    Ok(config)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Bench(BenchCommand::Run(args)) => {
            let config = bench_config(&cli, args)?;
            let store = store::bench_run(&config, cli.jobs)?;
            let n = config.runs as usize * config.variants.len() * config.problems.len() * config.dims.len();
            eprintln!("{n} runs written to {}", store.root.display());
        }
        Command::Bench(BenchCommand::Compare(args)) => {
            let root = args.store.clone().or(cli.out.clone()).unwrap_or_else(|| PathBuf::from("results"));
            let store = ResultsStore::new(&root);
            let how = if args.median { Aggregate::Median } else { Aggregate::Mean };
            for (dim, report, path) in compare::compare(&store, args.baseline, how, out.unwrap_or(&root))? {
                println!("D = {dim}");
                print!("{}", report.to_text());
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Sweep(args) => {
            let mut spec = SweepSpec::new(args.variant, args.p1.clone(), args.p2.clone());
            spec.problems = args.problems.clone();
            spec.dim = args.dim;
            spec.repeats = args.repeats;
            spec.max_fes = args.max_fes;
            spec.np = args.np;
            spec.base_seed = seed;
            let rows = sweep(&spec, cli.jobs)?;
            emit(out, &format!("sweep_{}.csv", args.variant), &to_csv(&rows))?;
        }
        Command::Dist(DistCommand::Sample {
            dist: name,
            p1,
            p2,
            symmetrize,
            n,
        }) => {
            let kind = DistKind::from(*name);
            let (d1, d2) = dist::default_params(kind);
            let spec = DistributionSpec::new(kind, p1.unwrap_or(d1), p2.unwrap_or(d2)).with_symmetrize(*symmetrize);
            emit(out, "samples.txt", &dist::sample_lines(&spec, *n, seed)?)?;
        }
        Command::Ident(IdentCommand::Run {
            variant,
            runs,
            np,
            iterations,
            inject_truth,
        }) => {
            let task = IdentificationTask::reference()?;
            let options = IdentifyOptions {
                np: *np,
                iterations: *iterations,
                inject_truth: *inject_truth,
            };
            let seeds: Vec<u64> = (0..*runs).map(|r| seed + r).collect();
            let report = ident_run(&task, *variant, &seeds, options, cli.jobs)?;
            emit(out, &format!("ident_{variant}.csv"), &report.to_csv())?;
        }
        Command::Ident(IdentCommand::Simulate { steps }) => {
            let mut system = FinancialSystem::<f64>::reference();
            if let Some(n) = steps {
                system.n = *n;
            }
            emit(out, "trajectory.csv", &simulate(&system)?.to_csv())?;
        }
        Command::Ident(IdentCommand::Landscape { axes, steps }) => {
            let task = IdentificationTask::reference()?;
            let axes = match axes {
                AxesArg::Ab => Axes::AB,
                AxesArg::Ac => Axes::AC,
                AxesArg::Bc => Axes::BC,
            };
            emit(out, "landscape.csv", &landscape(&task, axes, *steps)?)?;
        }
    }
    Ok(())
}
