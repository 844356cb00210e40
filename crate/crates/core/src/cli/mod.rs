//! Command-line front end. The `softsort` binary is a thin wrapper around
//! [`run`]; every subcommand is also callable as a library function.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 check failure.

pub mod apply;
pub mod bench;
pub mod gradcheck;
pub mod lts_demo;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use apply::{apply, ApplyOptions, Format};
pub use bench::{run_bench, write_bench_csv, BenchConfig, BenchRecord};
pub use gradcheck::{run_gradcheck, run_gradcheck_with, GradcheckConfig, GradcheckReport};
pub use lts_demo::{run_lts_demo, write_lts_csv, LtsDemoConfig, LtsDemoReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Data = 2,
    Check = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("check failed: {0}")]
    Check(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Data(_) | CliError::Io(_) => ExitStatus::Data,
            CliError::Check(_) => ExitStatus::Check,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "softsort", version, about = "Fast differentiable sorting and ranking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Soft (or hard) sort every row of a CSV / JSON-lines file.
    Sort(ApplyArgs),
    /// Soft (or hard) rank every row of a CSV / JSON-lines file.
    Rank(ApplyArgs),
    /// Time batched soft operators on random N(0, 1) inputs.
    Bench(BenchArgs),
    /// Compare Jacobian products against finite differences.
    Gradcheck(GradcheckArgs),
    /// Robust regression with soft least trimmed squares over an ε sweep.
    LtsDemo(LtsDemoArgs),
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Input file, or `-` for stdin.
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// q, e or kl-direct (rank only).
    #[arg(long, default_value = "q")]
    pub reg: String,
    /// desc or asc.
    #[arg(long, default_value = "desc")]
    pub direction: String,
    /// Exact sort / integer ranks instead of the soft operator.
    #[arg(long)]
    pub hard: bool,
    /// Read and write JSON lines (one array per line) instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "100,500,1000,2000,5000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 128)]
    pub batch: usize,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LtsDemoArgs {
    #[arg(long, default_value_t = 0.3)]
    pub outlier_fraction: f64,
    /// Comma-separated ε values to sweep.
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<f64>>,
    /// Fraction of training losses trimmed, k = ⌈k_fraction · n⌉.
    #[arg(long, default_value_t = 0.3)]
    pub k_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::Usage
            } else {
                ExitStatus::Success
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitStatus::Success,
        Err(e) => {
            eprintln!("softsort: {e}");
            e.status()
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sort(args) => apply_command("sort", args),
        Command::Rank(args) => apply_command("rank", args),
        Command::Bench(args) => {
            let config = BenchConfig {
                sizes: args.sizes,
                batch: args.batch,
                reps: args.reps,
                seed: args.seed,
                epsilon: args.epsilon,
            };
            let records = run_bench(&config)?;
            let mut out = open_output(&args.output)?;
            write_bench_csv(&mut out, &records)?;
            out.flush()?;
            Ok(())
        }
        Command::Gradcheck(args) => {
            let config = GradcheckConfig {
                trials: args.trials,
                n: args.n,
                seed: args.seed,
                ..GradcheckConfig::default()
            };
            let report = run_gradcheck(&config).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut out = std::io::stdout().lock();
            report.write(&mut out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Check(format!(
                    "{} instance(s) exceeded relative error {:e}",
                    report.total_failures(),
                    config.tolerance
                )))
            }
        }
        Command::LtsDemo(args) => {
            let mut config = LtsDemoConfig {
                outlier_fraction: args.outlier_fraction,
                k_fraction: args.k_fraction,
                seed: args.seed,
                ..LtsDemoConfig::default()
            };
            if let Some(eps) = args.epsilon {
                config.epsilons = eps;
            }
            let report = run_lts_demo(&config)?;
            let mut out = open_output(&args.output)?;
            write_lts_csv(&mut out, &report)?;
            out.flush()?;
            eprintln!("{}", report.summary());
            Ok(())
        }
    }
}

fn apply_command(op: &str, args: ApplyArgs) -> Result<(), CliError> {
    let options = ApplyOptions::from_flags(op, args.epsilon, &args.reg, &args.direction, args.hard, args.json)?;
    let input: Box<dyn std::io::Read> = if args.input.as_os_str() == "-" {
        Box::new(std::io::stdin().lock())
    } else {
        Box::new(std::fs::File::open(&args.input)?)
    };
    let mut out = open_output(&args.output)?;
    apply(input, &mut out, &options)?;
    out.flush()?;
    Ok(())
}
