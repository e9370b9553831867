//! Command-line entry point for the benchmark harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sadfo::bench::{run_experiment, ExperimentConfig, SolverKind};
use sadfo::{Activation, RbfKernel};

#[derive(Parser)]
#[command(name = "sadfo", version, about = "Surrogate-accelerated derivative-free optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark experiment described by a config file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file (flat `key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for traces, profiles and gain tables.
    #[arg(long)]
    out: PathBuf,
    /// Override the experiment seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the per-problem budget in simplex gradients.
    #[arg(long)]
    budget_simplex: Option<usize>,
    /// Override the solver list, e.g. `base,rbf-sobolev,nn-sobolev`.
    #[arg(long, value_delimiter = ',')]
    solvers: Option<Vec<SolverKindArg>>,
    /// Override the RBF kernel.
    #[arg(long)]
    kernel: Option<KernelArg>,
    /// Override the NN activation.
    #[arg(long)]
    activation: Option<ActivationArg>,
}

#[derive(Clone)]
struct SolverKindArg(SolverKind);

impl std::str::FromStr for SolverKindArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(SolverKindArg).map_err(|e| e.to_string())
    }
}

#[derive(Clone)]
struct KernelArg(RbfKernel);

impl std::str::FromStr for KernelArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(KernelArg).map_err(|e| e.to_string())
    }
}

#[derive(Clone)]
struct ActivationArg(Activation);

impl std::str::FromStr for ActivationArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(ActivationArg).map_err(|e| e.to_string())
    }
}

fn run(args: RunArgs) -> Result<(), String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut cfg = ExperimentConfig::parse(&text).map_err(|e| e.to_string())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = args.budget_simplex {
        cfg.budget_simplex = budget;
    }
    if let Some(solvers) = args.solvers {
        cfg.solvers = solvers.into_iter().map(|s| s.0).collect();
    }
    if let Some(kernel) = args.kernel {
        cfg.kernel = kernel.0;
    }
    if let Some(activation) = args.activation {
        cfg.activation = activation.0;
    }

    let artifacts = run_experiment(&cfg, Some(&args.out)).map_err(|e| e.to_string())?;

    let n_problems = artifacts.cells.len() / cfg.solvers.len().max(1);
    println!(
        "ran {} problems x {} solvers at budget {} simplex gradients (seed {})",
        n_problems,
        cfg.solvers.len(),
        cfg.budget_simplex,
        cfg.seed
    );
    for profile in &artifacts.profiles {
        println!(
            "  {:<12} final fraction solved: {:.3}",
            profile.solver,
            profile.fraction_at(cfg.budget_simplex as f64)
        );
    }
    for (kind, summary) in &artifacts.gain_summaries {
        println!(
            "  {:<12} surrogate gain median {:.3} (q1 {:.3}, q3 {:.3})",
            kind.name(),
            summary.median,
            summary.q1,
            summary.q3
        );
    }
    println!("artifacts written to {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::FAILURE
            }
        },
    }
}
