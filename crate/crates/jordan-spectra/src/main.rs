//! Command-line front end: parse flags, merge them with the optional JSON
//! config file and the threads environment variable, then dispatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jordan_spectra::experiment::{
    load_overrides, resolve_config, run, Command, ExperimentError, Overrides, THREADS_ENV_VAR,
};
use jordan_spectra::jordan::PerturbationKind;

#[derive(Parser)]
#[command(
    name = "jordan-spectra",
    version,
    about = "Monte Carlo spectra of randomly perturbed Jordan blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Sample spectra; writes eigenvalues.csv and summary.json.
    Simulate(CommonArgs),
    /// Compare the radial profile with the limiting interior density;
    /// writes histogram.csv and verdict.json.
    Density(CommonArgs),
    /// Exactness suite for the bordered-operator calculus; writes report.json.
    GrushinCheck(CommonArgs),
    /// Envelope equivalences and the density bridge fit; writes report.json.
    AsymptoticsCheck(CommonArgs),
    /// Seeded scatter CSVs for couplings 1e-5 through 1e-2.
    Figures(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Matrix dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Coupling constant in front of the random perturbation.
    #[arg(long)]
    delta: Option<f64>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; trial i draws only from stream (seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// Inner-radius parameter of the concentration annulus.
    #[arg(long)]
    sigma: Option<f64>,
    /// Outer radius of the density comparison region, in (0, 1).
    #[arg(long)]
    r_max: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to JORDAN_SPECTRA_THREADS, then 1.
    #[arg(long)]
    threads: Option<usize>,
    /// JSON file with the same fields; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Perturbation ensemble.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Gaussian,
    RankOne,
}

impl From<KindArg> for PerturbationKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Gaussian => PerturbationKind::Gaussian,
            KindArg::RankOne => PerturbationKind::RankOne,
        }
    }
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            delta: self.delta,
            trials: self.trials,
            seed: self.seed,
            sigma: self.sigma,
            r_max: self.r_max,
            out_dir: self.out.clone(),
            threads: self.threads,
            kind: self.kind.map(PerturbationKind::from),
        }
    }
}

fn env_threads() -> Result<Option<usize>, ExperimentError> {
    match std::env::var(THREADS_ENV_VAR) {
        Ok(raw) if !raw.trim().is_empty() => raw.trim().parse().map(Some).map_err(|_| {
            ExperimentError::Config(format!(
                "{THREADS_ENV_VAR} must be a positive integer, got {raw:?}"
            ))
        }),
        _ => Ok(None),
    }
}

fn execute(command: Command, args: &CommonArgs) -> Result<(), ExperimentError> {
    let file = match &args.config {
        Some(path) => load_overrides(path)?,
        None => Overrides::default(),
    };
    let config = resolve_config(command, file, args.overrides(), env_threads()?)?;
    run(&config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        CliCommand::Simulate(args) => (Command::Simulate, args),
        CliCommand::Density(args) => (Command::Density, args),
        CliCommand::GrushinCheck(args) => (Command::GrushinCheck, args),
        CliCommand::AsymptoticsCheck(args) => (Command::AsymptoticsCheck, args),
        CliCommand::Figures(args) => (Command::Figures, args),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
