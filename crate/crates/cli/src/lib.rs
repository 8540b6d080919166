//! The `qhj` command line: derivation checks, simulations, residual
//! evaluation, trajectories and aggregate reports, all written as JSON and
//! CSV artifacts. Exit codes: 0 when every check passes, 1 when a check
//! fails, 2 for usage or configuration errors.

mod artifact;
pub mod commands;
mod error;
pub mod evaluate;
mod outcome;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{CommandFactory, Parser, Subcommand};

pub use artifact::Envelope;
pub use error::CliError;
pub use outcome::{Check, CheckKind, CommandOutcome};

#[derive(Debug, Parser)]
#[command(name = "qhj", version, about = "Quantum Hamilton-Jacobi derivation and verification toolkit")]
pub struct Cli {
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "qhj-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a symbolic derivation against its goldens.
    Derive {
        #[arg(value_parser = PossibleValuesParser::new(qhj_derive::PIPELINES))]
        pipeline: String,
    },
    /// Propagate a scenario and export every stored slice.
    Simulate { config: PathBuf },
    /// Evaluate residual equations on every slice of a scenario.
    Residuals {
        config: PathBuf,
        /// Comma-separated equation ids.
        #[arg(long, value_delimiter = ',', required = true)]
        eq: Vec<String>,
        /// Max-norm tolerance for every requested equation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Integrate guidance-law trajectories through a scenario.
    Trajectories {
        config: PathBuf,
        /// `sample:N`, `linspace:N:LO:HI`, `list:X[,Y];...` or a file of positions.
        #[arg(long)]
        seeds: String,
        /// Random seed for `sample:N`.
        #[arg(long)]
        seed: Option<u64>,
        /// Integrator step, default the slice spacing.
        #[arg(long)]
        dt: Option<f64>,
        /// Keep every n-th integrator step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Aggregate the JSON artifacts of a directory.
    Report { dir: PathBuf },
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("QHJ_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("QHJ_THREADS = `{s}` must be a positive integer"))),
        },
    }
}

pub fn execute(cli: &Cli) -> Result<CommandOutcome, CliError> {
    let out = &cli.out;
    match &cli.command {
        Command::Derive { pipeline } => commands::derive(pipeline, out),
        Command::Simulate { config } => commands::simulate_cmd(config, out),
        Command::Residuals { config, eq, tol } => commands::residuals(config, eq, *tol, out),
        Command::Trajectories { config, seeds, seed, dt, stride } => {
            let args = commands::TrajArgs { seeds, seed: *seed, dt: *dt, stride: *stride };
            commands::trajectories(config, &args, out)
        }
        Command::Report { dir } => commands::report(dir),
    }
}

fn usage_for(sub: Option<&OsString>) -> String {
    let mut cmd = Cli::command();
    let name = sub.and_then(|s| s.to_str()).unwrap_or("");
    match cmd.find_subcommand_mut(name) {
        Some(sc) => sc.render_usage().to_string().replace("Usage: ", "Usage: qhj "),
        None => cmd.render_usage().to_string(),
    }
}

/// Parse `argv` (including the program name) and run the command on a
/// worker pool capped by `QHJ_THREADS`.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                return CommandOutcome { code: 0, artifacts: Vec::new(), summary: vec![e.render().to_string()] };
            }
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text.push('\n');
                text.push_str(&usage_for(argv.get(1)));
            }
            return CommandOutcome { code: 2, artifacts: Vec::new(), summary: vec![text] };
        }
    };
    let result = threads().and_then(|n| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = n {
            b = b.num_threads(n);
        }
        let pool = b.build().map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| execute(&cli))
    });
    result.unwrap_or_else(|e| CommandOutcome {
        code: e.exit_code(),
        artifacts: Vec::new(),
        summary: vec![format!("error: {e}")],
    })
}
