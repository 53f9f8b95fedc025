//! `kakeya`: exponent curves, verification suites and experiments for
//! A-restricted Kakeya sets.

mod commands;
mod config;
mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {msg}")]
    Config { path: String, line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] kakeya_core::error::Error),
}

impl CliError {
    /// 1 for a failed verification or internal cross-check, 2 for
    /// everything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Verification(_) | Self::Core(kakeya_core::error::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kakeya", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("KAKEYA_BUILD_ID"), ")"))]
#[command(about = "Laboratory for A-restricted Kakeya sets and their maximal functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Best known lower bound for dim K_A in R^n when dim A = s.
    Bounds {
        #[arg(long)]
        n: u32,
        /// Exact rational, e.g. `2`, `1/2` or `2.25`.
        #[arg(long)]
        s: String,
    },
    /// Write the full lower-bound curve and its component lines as CSV.
    Curve {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1/16")]
        step: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a verification suite and print its table.
    Verify {
        /// tubes, cordoba, bush, boxdim or maximal.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Build A, K_A, profiles and the bush decomposition from a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `output` key.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Generate a maximal delta-separated direction net as CSV.
    Net {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Identify antipodal directions.
        #[arg(long)]
        projective: bool,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting dimension fit of a generated fractal.
    Boxdim {
        /// single_point, lattice:STEP, cantor_product:RATIO:AXES or
        /// random_self_similar:MAPS:RATIO:SEED.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        /// Generation scale.
        #[arg(long)]
        delta: f64,
        /// Largest covering scale.
        #[arg(long)]
        first: f64,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Write `delta,count` rows here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bounds { n, s } => commands::bounds(n, &s),
        Command::Curve { n, step, out_dir } => commands::curve(n, &step, &out_dir),
        Command::Verify { suite, seed } => commands::verify(&suite, seed),
        Command::Experiment { config, out_dir } => commands::experiment(&config, out_dir.as_deref()),
        Command::Net { n, delta, seed, projective, out } => commands::net(n, delta, seed, projective, out.as_deref()),
        Command::Boxdim { spec, n, delta, first, ratio, count, out } => {
            commands::boxdim(&spec, n, delta, first, ratio, count, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kakeya: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
