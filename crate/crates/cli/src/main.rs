//! Command-line front end for the eigenvalue continuation pipeline.
//!
//! Subcommands: `demo-sqrt` tabulates the square-root warmup, `solve`
//! runs the full pipeline on one configuration, `sweep` repeats it over
//! a list of auxiliary constructions, `wavefunction` compares a
//! continued eigenfunction with the grid solution, and `oracle` prints
//! refined grid levels with no expansion involved.
//!
//! Exit codes: 0 on success, 2 for configuration problems, 3 for
//! numerical failures (the message names the failing stage), 4 when a
//! sweep finishes only partially.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// What went wrong, sorted by who has to fix it.
#[derive(Debug)]
pub(crate) enum CliError {
    /// The request itself is unusable; fix flags or the config file.
    Config(String),
    /// The computation failed; the message names the stage.
    Numerical(String),
    /// Some sweep points failed, the merged output holds the rest.
    PartialSweep(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::PartialSweep(_) => 4,
        }
    }

    pub(crate) fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::PartialSweep(m) => m,
        }
    }
}

impl From<eigenpade::Error> for CliError {
    fn from(e: eigenpade::Error) -> Self {
        match &e {
            eigenpade::Error::Config(_) | eigenpade::Error::Domain(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(format!("{} stage: {e}", other.stage())),
        }
    }
}

/// Shared job flags; every value can also come from --config, with
/// flags taking precedence.
#[derive(Args, Debug)]
pub(crate) struct JobArgs {
    /// Target potential: poschl-teller, hulthen, power23, flat-bottom,
    /// oscillator, coulomb, or linear
    #[arg(long)]
    pub potential: Option<String>,

    /// Potential parameters as key=value pairs, e.g. beta=20 or
    /// v0=2,r0=3
    #[arg(long)]
    pub params: Option<String>,

    /// Auxiliary scheme: taylor:E[:positive|negative] (E a number or
    /// "min"), laurent, fit:linear|quadratic:a:b[:npts],
    /// explicit:oscillator:c:x0:voff | explicit:coulomb:alpha |
    /// explicit:linear:k:b, or identity:... with the same families
    #[arg(long)]
    pub aux: Option<String>,

    /// Levels to solve, comma separated with a..b runs, e.g. 0,1,2 or
    /// 1..5
    #[arg(long)]
    pub levels: Option<String>,

    /// Expansion order of the energy series
    #[arg(long)]
    pub order: Option<usize>,

    /// Continuation degrees for the wavefunction command
    #[arg(long, num_args = 2, value_names = ["L", "M"])]
    pub pade: Option<Vec<usize>>,

    /// Basis truncation dimension
    #[arg(long)]
    pub dim: Option<usize>,

    /// Quadrature accuracy target for matrix elements
    #[arg(long)]
    pub accuracy: Option<f64>,

    /// Output CSV path; each command has its own default
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker bound for sweeps; 0 lets the pool pick
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Polish tabulated Airy zeros before using the linear basis
    #[arg(long)]
    pub refine_zeros: bool,

    /// Oracle grid as a:b:npts, replacing the per-potential default
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Flat key=value config file; '#' starts a comment
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "eigenpade",
    version,
    about = "Bound-state energies through perturbation series and rational continuation"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Tabulate sqrt(1+x) against its truncated series and the [2/2]
    /// rational continuation
    DemoSqrt {
        /// Output CSV path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the configured levels and write the energy table
    Solve {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Solve once per auxiliary construction and merge the results
    Sweep {
        #[command(flatten)]
        job: JobArgs,
        /// Taylor expansion energies, comma separated
        #[arg(long, allow_hyphen_values = true)]
        energies: Option<String>,
        /// Taylor expansion points x_E, comma separated; the sign picks
        /// the root side
        #[arg(long, allow_hyphen_values = true)]
        xe: Option<String>,
        /// Fit windows a:b, comma separated
        #[arg(long)]
        ranges: Option<String>,
    },
    /// Tabulate one continued eigenfunction against the grid state
    Wavefunction {
        #[command(flatten)]
        job: JobArgs,
        /// Level to reconstruct
        #[arg(long)]
        level: Option<usize>,
    },
    /// Print refined grid levels, the expansion-free reference
    Oracle {
        #[command(flatten)]
        job: JobArgs,
        /// How many levels to refine
        #[arg(long)]
        count: Option<usize>,
    },
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Commands::DemoSqrt { out } => commands::demo_sqrt(out),
        Commands::Solve { job } => {
            let job = config::resolve(&job)?;
            commands::solve(&job)
        }
        Commands::Sweep { job, energies, xe, ranges } => {
            let job = config::resolve(&job)?;
            let points = config::resolve_sweep_points(&job, energies, xe, ranges)?;
            commands::sweep(&job, &points)
        }
        Commands::Wavefunction { job, level } => {
            let job = config::resolve(&job)?;
            let level = match level {
                Some(n) => n,
                None => match job.extras.get("level") {
                    Some(text) => text.trim().parse().map_err(|_| {
                        CliError::Config(format!("config key level has unusable value {text:?}"))
                    })?,
                    None => {
                        return Err(CliError::Config(
                            "wavefunction needs --level or level= in the config file".into(),
                        ))
                    }
                },
            };
            commands::wavefunction(&job, level)
        }
        Commands::Oracle { job, count } => {
            let job = config::resolve(&job)?;
            let count = match count {
                Some(n) => n,
                None => match job.extras.get("count") {
                    Some(text) => text.trim().parse().map_err(|_| {
                        CliError::Config(format!("config key count has unusable value {text:?}"))
                    })?,
                    None => 1,
                },
            };
            commands::oracle(&job, count)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
