//! `opuc`: configuration-driven runner for the OPUC numerical experiments.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use opuc_core::OpucError;

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Generate,
    Evolve,
    BsDensity,
    Moments,
    CompareIntervals,
    Resonances,
    KmaxCheck,
    AbelBound,
    Energy,
    Scan,
    Decompose,
    Roundtrip,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Debug, Parser)]
#[command(name = "opuc", version, about = "Orthogonal polynomials on the unit circle: experiments and reports")]
struct Args {
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory receiving the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the `seed` key of the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core. Falls back to OPUC_THREADS.
    #[arg(long, env = "OPUC_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(OpucError),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<OpucError> for CliError {
    fn from(e: OpucError) -> Self {
        CliError::Core(e)
    }
}

fn run(args: Args) -> Result<Vec<PathBuf>, CliError> {
    let bytes = match &args.config {
        Some(p) => std::fs::read(p).map_err(|e| CliError::io(p, e))?,
        None => Vec::new(),
    };
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::usage("config is not UTF-8"))?;
    let config = Config::parse(&text)?;
    if !args.out.is_dir() {
        std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| commands::dispatch(args.command, &config, &bytes, args.seed, &args.out))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("opuc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
