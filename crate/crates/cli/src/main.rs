//! `legendre`: reproducible experiments on Legendre's prime-counting formula.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 numerical or bracketing failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

pub const CACHE_ENV: &str = "LEGENDRE_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".legendre-cache";

#[derive(Debug, Parser)]
#[command(
    name = "legendre",
    version,
    about = "Legendre's prime-counting formula, li(x), and arithmetic bias"
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Inclusive sieve limit (defaults to the cached table, else the command's natural range).
    #[arg(long, global = true)]
    pub limit: Option<u64>,
    /// First prime included in averages (default 3 for --target pi, 5 otherwise).
    #[arg(long, global = true)]
    pub start: Option<u64>,
    /// Last sample point of averages and tracks.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub end: u64,
    /// Bisection tolerance on B.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Directory of the pi-checkpoint cache.
    #[arg(long, global = true, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: PathBuf,
    /// Output file, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,
    /// Do not subtract 1 for counting 1 as a prime.
    #[arg(long, global = true)]
    pub no_unity_offset: bool,
    /// Use π(p) − 1 instead of π(p) at a sample prime p.
    #[arg(long, global = true)]
    pub exclude_endpoint: bool,
    /// What the Legendre value is compared against.
    #[arg(long, global = true, value_enum, default_value_t = TargetArg::Pi)]
    pub target: TargetArg,
    /// Comma-separated B values.
    #[arg(long, global = true)]
    pub b_list: Option<String>,
    /// Zeta zeros file (one ordinate per line); defaults to the bundled first 100.
    #[arg(long, global = true)]
    pub zeros_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// Exact π(x).
    Pi,
    /// li(x) = ∫_2^x dt / log t.
    Li,
    /// Li(x) = li(x) + Li(2).
    LiPv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve, write the pi-checkpoint cache, print a summary.
    Sieve,
    /// Average error for a list of B values.
    Table1,
    /// Bisect for the B that zeroes the average error.
    Fit {
        #[arg(long)]
        bracket_lo: Option<f64>,
        #[arg(long)]
        bracket_hi: Option<f64>,
    },
    /// Scan li(x) − π(x) for sign violations.
    Bias {
        #[arg(long, default_value_t = 8)]
        lo: u64,
        #[arg(long)]
        hi: Option<u64>,
    },
    /// Per-sample error tracks as CSV.
    Tracks {
        /// Uniform grid stride instead of sampling at primes.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long)]
        no_li: bool,
    },
    /// Where li starts beating the Legendre formula.
    Crossover {
        #[arg(long, default_value_t = 20)]
        window: usize,
        #[arg(long, default_value_t = 10_000)]
        stride: u64,
    },
    /// Explicit-formula checks.
    Riemann {
        /// Compare Möbius-inverted f with the sieve count at --x.
        #[arg(long, conflicts_with = "partial_sums")]
        check_inversion: bool,
        /// Explicit-formula estimates using the first K zeros.
        #[arg(long)]
        partial_sums: bool,
        /// Evaluation points (comma-separated).
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        /// Zero counts for --partial-sums.
        #[arg(long, value_delimiter = ',', default_values_t = [0usize, 10, 50, 100])]
        k: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<legendre_core::Error> for CliError {
    fn from(e: legendre_core::Error) -> Self {
        CliError::Core(e)
    }
}
