//! `rbrdo` experiment runner.
//!
//! Exit status: 0 on success, 2 for configuration or usage errors, 3 for
//! numerical failures and 4 for I/O errors or malformed input files.

mod config;
mod error;
mod run;
mod tools;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rbrdo::problems::ProblemId;

use config::{AggregatorName, Mode, PlacementName, RunConfig, SamplingName, StrategyName};
use error::CliResult;

#[derive(Parser)]
#[command(name = "rbrdo", version, about = "Reliability-based robust design optimization runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a problem and write fronts, fit statistics and run metadata.
    Run(Box<RunArgs>),
    /// Most probable point of one constraint at a fixed design.
    Mpp(MppArgs),
    /// Quadratic fit of one front column against another.
    StatsFit(StatsFitArgs),
    /// List the shipped problems.
    ListProblems,
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML config; a previous run's metadata file also works. Flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyName>,
    /// Comma-separated δ levels.
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    /// Neighborhood sample count M.
    #[arg(long)]
    samples: Option<usize>,
    /// Type II threshold η.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_enum)]
    aggregator: Option<AggregatorName>,
    #[arg(long, value_enum)]
    sampling: Option<SamplingName>,
    #[arg(long, value_enum)]
    placement: Option<PlacementName>,
    /// Fixed reliability index (rbdo mode).
    #[arg(long)]
    beta: Option<f64>,
    /// DE amplification factor.
    #[arg(long = "f")]
    f: Option<f64>,
    /// DE crossover probability.
    #[arg(long)]
    cr: Option<f64>,
    #[arg(long)]
    np: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// MODE reduction parameter.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    pseudo_fronts: Option<usize>,
    /// Constraint penalty coefficient Ψ.
    #[arg(long)]
    psi: Option<f64>,
    #[command(flatten)]
    asosl: AsoslArgs,
    #[arg(long)]
    benchmark_family: Option<String>,
    #[arg(long)]
    catalyst_controls: Option<String>,
    /// RMS denominator of the front fits: dof or population.
    #[arg(long)]
    rms: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Path prefix of the output files (default: $RBRDO_OUTPUT_DIR/<problem>-<mode>).
    #[arg(long)]
    output: Option<String>,
    /// Also write per-generation history files.
    #[arg(long)]
    history: bool,
}

#[derive(Args, Default)]
struct AsoslArgs {
    #[arg(long)]
    delta_eta: Option<f64>,
    #[arg(long)]
    alpha_b: Option<f64>,
    #[arg(long)]
    s_b: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct MppArgs {
    #[arg(long)]
    problem: String,
    /// 1-based constraint index.
    #[arg(long)]
    constraint: usize,
    /// Comma-separated design vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    d: Vec<f64>,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    asosl: AsoslArgs,
    #[arg(long, default_value = "standard")]
    benchmark_family: String,
    #[arg(long, default_value = "mpp")]
    catalyst_controls: String,
    /// Write the iteration trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct StatsFitArgs {
    /// Front file with a header row.
    file: PathBuf,
    #[arg(long, default_value = "beta")]
    x: String,
    #[arg(long)]
    y: String,
    /// Column to group rows by (default: delta_level when present).
    #[arg(long)]
    group: Option<String>,
    /// Fit all rows together.
    #[arg(long, conflicts_with = "group")]
    no_group: bool,
    #[arg(long, default_value = "dof")]
    rms: String,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl RunArgs {
    fn into_config(self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        set(&mut c.problem, self.problem);
        set(&mut c.mode, self.mode);
        set(&mut c.strategy, self.strategy);
        set(&mut c.delta, self.delta);
        set(&mut c.samples, self.samples);
        set(&mut c.eta, self.eta);
        set(&mut c.aggregator, self.aggregator);
        set(&mut c.sampling, self.sampling);
        set(&mut c.placement, self.placement);
        if self.beta.is_some() {
            c.beta = self.beta;
        }
        set(&mut c.f, self.f);
        set(&mut c.cr, self.cr);
        set(&mut c.np, self.np);
        if self.generations.is_some() {
            c.generations = self.generations;
        }
        set(&mut c.r, self.r);
        set(&mut c.pseudo_fronts, self.pseudo_fronts);
        set(&mut c.psi, self.psi);
        set(&mut c.delta_eta, self.asosl.delta_eta);
        set(&mut c.alpha_b, self.asosl.alpha_b);
        set(&mut c.s_b, self.asosl.s_b);
        set(&mut c.epsilon, self.asosl.epsilon);
        set(&mut c.max_iters, self.asosl.max_iters);
        set(&mut c.benchmark_family, self.benchmark_family);
        set(&mut c.catalyst_controls, self.catalyst_controls);
        set(&mut c.rms, self.rms);
        set(&mut c.seed, self.seed);
        set(&mut c.threads, self.threads);
        if self.output.is_some() {
            c.output = self.output;
        }
        c.history |= self.history;
        c.resolve()
    }
}

fn list_problems() {
    for p in ProblemId::ALL {
        let levels: Vec<String> = p.delta_levels().iter().map(|l| l.to_string()).collect();
        println!("{:<15} {} [delta: {}]", p.name(), p.description(), levels.join(","));
    }
}

fn mpp(args: MppArgs) -> CliResult<()> {
    let id: ProblemId = args.problem.parse()?;
    let opts = config::problem_options(&args.benchmark_family, &args.catalyst_controls)?;
    let defaults = RunConfig::default();
    let pick = |v: Option<f64>, default: f64| v.unwrap_or(default);
    let mut params = config::asosl_params(
        pick(args.asosl.delta_eta, defaults.delta_eta),
        pick(args.asosl.alpha_b, defaults.alpha_b),
        pick(args.asosl.s_b, defaults.s_b),
        pick(args.asosl.epsilon, defaults.epsilon),
        args.asosl.max_iters.unwrap_or(defaults.max_iters),
    )
    .with_beta(args.beta);
    params.keep_trace = args.trace.is_some();
    let r = tools::mpp(id, &opts, args.constraint, &args.d, &params)?;
    tools::print_mpp(&r);
    if let Some(path) = &args.trace {
        tools::write_trace(&r, path)?;
    }
    Ok(())
}

fn stats_fit(args: StatsFitArgs) -> CliResult<()> {
    let rms = config::parse_rms(&args.rms)?;
    let table = tools::Table::read(&args.file)?;
    let group = match (&args.group, args.no_group) {
        (_, true) => None,
        (Some(g), false) => Some(g.as_str()),
        (None, false) => table.header.iter().any(|h| h == "delta_level").then_some("delta_level"),
    };
    for line in tools::stats_fit(&table, &args.x, &args.y, group, rms)? {
        println!("{line}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(args) => run::run(&args.into_config()?),
        Command::Mpp(args) => mpp(args),
        Command::StatsFit(args) => stats_fit(args),
        Command::ListProblems => {
            list_problems();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}
