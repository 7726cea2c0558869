//! Command-line front end: argument parsing, configuration merging and
//! the subcommands behind the `hartigan-lab` binary.

mod commands;
mod config;

pub use commands::THREADS_ENV;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Hartigan–Wong k-means laboratory.
#[derive(Debug, Parser)]
#[command(name = "hartigan-lab", version)]
struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run Hartigan–Wong or Lloyd on a point set.
    Run(RunArgs),
    /// Build the exponential-length instance and its move script.
    Lowerbound(LowerboundArgs),
    /// Print the ten gadget inequalities as exact fractions.
    VerifyAppendix,
    /// Perturb an instance and record iteration counts.
    Smoothed(SmoothedArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// CSV or JSON point file.
    #[arg(long, conflicts_with = "gadget")]
    pub input: Option<PathBuf>,
    /// Use the built-in instance with this many gadgets instead of a file.
    #[arg(long)]
    pub gadget: Option<usize>,
    /// Input format (default: from the file extension).
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// exact, float or f32.
    #[arg(long)]
    pub mode: Option<String>,
    /// hw or lloyd.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// first, best, random or scripted.
    #[arg(long)]
    pub rule: Option<String>,
    /// balanced or given.
    #[arg(long)]
    pub init: Option<String>,
    /// Starting assignment for `--init given`: one cluster id per line.
    #[arg(long)]
    pub assign: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// JSON-lines move log.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Summary JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LowerboundArgs {
    #[arg(long)]
    pub m: Option<usize>,
    /// Replay the script in exact arithmetic and check every gain.
    #[arg(long)]
    pub verify: bool,
    /// JSON-lines trace of the replayed script.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Verification report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SmoothedArgs {
    /// Comma-separated standard deviations.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, conflicts_with = "gadget")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub gadget: Option<usize>,
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Only float is accepted.
    #[arg(long)]
    pub mode: Option<String>,
    /// first, best or random.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Worker threads (default: HARTIGAN_LAB_THREADS, then all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Perturb with sigma > 1 directly instead of rescaling the input.
    #[arg(long)]
    pub no_rescale: bool,
    /// Fill the wall_time_ms column (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// CSV output (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-sigma summary JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Config(_) => 65,
            CliError::Io(_) => 74,
            CliError::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<hartigan_core::Error> for CliError {
    fn from(err: hartigan_core::Error) -> Self {
        use hartigan_core::Error as E;
        match err {
            E::Io(e) => CliError::Io(e.to_string()),
            E::Precondition(m) => CliError::Config(m),
            e
            @ (E::Parse { .. } | E::InvalidK { .. } | E::DimensionMismatch { .. } | E::Csv(_)) => {
                CliError::Config(e.to_string())
            }
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Normal output goes to `stdout`, diagnostics to
/// `stderr`.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let usage_error = err.use_stderr();
            let text = err.render().to_string();
            let _ = if usage_error {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return if usage_error { 64 } else { 0 };
        }
    };
    let result =
        config::FileConfig::load(cli.config.as_deref()).and_then(|file| match cli.command {
            Command::Run(args) => commands::run(args, &file, stdout),
            Command::Lowerbound(args) => commands::lowerbound(args, &file, stdout),
            Command::VerifyAppendix => commands::verify_appendix(stdout),
            Command::Smoothed(args) => commands::smoothed(args, &file, stdout),
        });
    let _ = stdout.flush();
    match result {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", err.message());
            err.exit_code()
        }
    }
}
