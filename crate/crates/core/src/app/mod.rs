//! Command-line front end: argument types, dispatch and output.

mod commands;
mod record;
mod suite;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{GenSpec, Instance};
use crate::par::Exec;

pub use record::{config_hash, ratio, to_csv, to_json, ResultRecord, CSV_COLUMNS, STATUS_MARGIN, STATUS_OK, STATUS_VIOLATION};
pub use suite::{run_suite, SuiteName};

#[derive(Parser, Debug, Clone)]
#[command(name = "latcov", version, about = "Latency covering algorithms and their oracle checks")]
pub struct Cli {
    /// Base seed for every random choice not given its own seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output path; records go to `<out>.csv` and `<out>.json`, `gen`
    /// writes the instance file itself.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record wall-clock time (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate an instance file, e.g. `gen explicit:n=6:seed=1`.
    Gen(GenArgs),
    /// Greedy submodular ranking.
    Rank(RankArgs),
    /// One submodular orienteering query.
    Sop(SopArgs),
    /// Minimum latency submodular cover.
    Mlsc(MlscArgs),
    /// Latency covering Steiner tree.
    Lcst(LcstArgs),
    /// Adaptive greedy for stochastic submodular ranking.
    Wssr(StochArgs),
    /// Stochastic set cover.
    Ssc(CoverArgs),
    /// Shared filter evaluation.
    Filters(FilterArgs),
    /// Stochastic generalized min-sum set cover.
    Sgmssc(CoverArgs),
    /// Batteries of lemma checks over seeded random instances.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    /// `<kind>:n=<n>:seed=<seed>`.
    pub spec: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Source {
    /// Instance file.
    #[arg(long, alias = "tree", conflicts_with = "gen")]
    pub instance: Option<PathBuf>,
    /// Generator spec used instead of a file.
    #[arg(long)]
    pub gen: Option<String>,
}

impl Source {
    pub fn label(&self) -> String {
        match (&self.instance, &self.gen) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(g)) => g.clone(),
            (None, None) => String::new(),
        }
    }

    pub fn load(&self) -> Result<Instance> {
        match (&self.instance, &self.gen) {
            (Some(p), _) => Instance::parse(&std::fs::read_to_string(p)?),
            (None, Some(g)) => g.parse::<GenSpec>()?.generate(),
            (None, None) => Err(Error::invalid("give --instance or --gen")),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RankArgs {
    #[command(flatten)]
    pub source: Source,
    /// Compare with the brute-force optimum and check the recurrence.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SopArgs {
    #[command(flatten)]
    pub source: Source,
    /// Path length budget; the metric diameter when omitted.
    #[arg(long)]
    pub budget: Option<u64>,
    /// `exact`, `rg` or `greedy`.
    #[arg(long, default_value = "rg")]
    pub solver: String,
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MlscArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value = "rg")]
    pub solver: String,
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LcstArgs {
    #[command(flatten)]
    pub source: Source,
    /// Seed of the tree embedding; defaults to `--seed`.
    #[arg(long)]
    pub embed_seed: Option<u64>,
    /// Seed of the rounding; defaults to `--seed`.
    #[arg(long)]
    pub round_seed: Option<u64>,
    /// Separation tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Require a tree instance.
    #[arg(long)]
    pub no_embed: bool,
    /// Samples per level are `repeat * (3 + log2 g_max)`.
    #[arg(long, default_value_t = 6.0)]
    pub repeat: f64,
    /// Level trees must weigh at most `weight * (3 + log2 g_max) * 2^l`.
    #[arg(long, default_value_t = 192.0)]
    pub weight: f64,
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct StochArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalArgs {
    /// Monte-Carlo samples when exact evaluation is out of reach, and for
    /// the recurrence check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Seed of the outcome samples; defaults to `--seed`.
    #[arg(long)]
    pub sample_seed: Option<u64>,
    /// Compare with the optimal adaptive policy.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoverArgs {
    /// File with GROUPS (the sets) and STOCHASTIC sections; a random
    /// instance is drawn from `--seed` otherwise.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Elements of the random instance.
    #[arg(long, default_value_t = 3)]
    pub elements: usize,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FilterArgs {
    /// Queries as filter lists, e.g. `0,1;1,2`.
    #[arg(long)]
    pub queries: String,
    /// Pass probability per filter, e.g. `1/2,1/3,2/3`.
    #[arg(long)]
    pub selectivity: String,
    /// Cost per filter; all 1 when omitted.
    #[arg(long)]
    pub costs: Option<String>,
    #[arg(long, value_enum, default_value_t = FilterMode::MinCost)]
    pub objective: FilterMode,
    #[command(flatten)]
    pub eval: EvalArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    MinCost,
    Latency,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SuiteArgs {
    #[arg(value_enum)]
    pub name: SuiteName,
    /// Seeds `0..seeds`, offset by `--seed`.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
}

/// Everything a run depends on.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub command: Command,
}

impl RunConfig {
    pub fn hash(&self) -> String {
        config_hash(self)
    }
}

/// Output of a run: records, or instance text for `gen`.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Records(Vec<ResultRecord>),
    Instance(String),
}

/// Runs a configuration. Records carry the configuration hash.
pub fn run(config: &RunConfig, exec: Exec, timing: bool) -> Result<Output> {
    let start = std::time::Instant::now();
    let mut records = match &config.command {
        Command::Gen(a) => {
            return Ok(Output::Instance(a.spec.parse::<GenSpec>()?.generate()?.to_text()));
        }
        Command::Rank(a) => vec![commands::rank(a, config.seed)?],
        Command::Sop(a) => vec![commands::sop(a, config.seed)?],
        Command::Mlsc(a) => vec![commands::mlsc(a, config.seed)?],
        Command::Lcst(a) => vec![commands::lcst(a, config.seed, exec)?],
        Command::Wssr(a) => {
            let inst = a.source.load()?.stochastic_instance()?;
            vec![commands::stochastic("wssr", &a.source.label(), &inst, &a.eval, config.seed, exec)?]
        }
        Command::Ssc(a) => vec![commands::cover("ssc", a, config.seed, exec)?],
        Command::Sgmssc(a) => vec![commands::cover("sgmssc", a, config.seed, exec)?],
        Command::Filters(a) => vec![commands::filters(a, config.seed, exec)?],
        Command::Suite(a) => run_suite(a.name, config.seed, a.seeds, exec)?,
    };
    let hash = config.hash();
    let wall = timing.then(|| start.elapsed().as_millis() as u64);
    for r in &mut records {
        r.config_hash = hash.clone();
        r.wall_ms = wall;
    }
    Ok(Output::Records(records))
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 2,
        Error::Infeasible(_) => 3,
        _ => 1,
    }
}

/// Parses arguments, runs, writes output and returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let config = RunConfig {
        seed: cli.seed,
        command: cli.command.clone(),
    };
    let result = crate::par::with_jobs(cli.jobs, || run(&config, exec, cli.timing));
    match result.and_then(|out| emit(&cli, out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<i32> {
    match out {
        Output::Instance(text) => {
            match &cli.out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Output::Records(records) => {
            let csv = to_csv(&records)?;
            let json = to_json(&records);
            if let Some(p) = &cli.out {
                std::fs::write(p.with_extension("csv"), &csv)?;
                std::fs::write(p.with_extension("json"), &json)?;
            }
            match cli.format {
                Format::Csv => print!("{csv}"),
                Format::Json => print!("{json}"),
            }
            if records.iter().any(|r| r.is_violation()) {
                eprintln!("error: an invariant check failed");
                return Ok(2);
            }
            Ok(0)
        }
    }
}
