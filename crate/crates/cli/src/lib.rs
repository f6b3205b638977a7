//! Command-line front end for the `ncgraph` library.
//!
//! Every command produces one JSON report. The process exit code is 0 when
//! every executed check passes, 1 when a check fails and 2 on bad input.

mod commands;
mod input;
pub mod reproduce;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use ncgraph::numkernel::Tolerance;
use ncgraph::par::Exec;
use ncgraph::params::{Effort, SearchBudget};
use serde_json::Value;

pub use input::{load_input, Input};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("unknown case `{0}` (try `reproduce --list`)")]
    UnknownCase(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ncgraph::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EffortArg {
    Quick,
    Full,
}

impl From<EffortArg> for Effort {
    fn from(e: EffortArg) -> Self {
        match e {
            EffortArg::Quick => Effort::Quick,
            EffortArg::Full => Effort::Full,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ncgraph", version, about = "Complexity, capacity and theta bounds for channels and their confusability graphs")]
pub struct Cli {
    /// Uniform numerical tolerance (rank, positivity and subspace angle).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every randomised search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Iteration budget per search start.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Number of search starts.
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = EffortArg::Quick)]
    pub effort: EffortArg,
    /// Also write the report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Leave timing and timestamp fields out of the report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Run independent work items on the current thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lovasz theta of a graph, or a witness lower bound for a system or channel.
    Theta { file: PathBuf },
    /// Certified bounds on alpha, beta, gamma and the intersection number.
    Params { file: PathBuf },
    /// Replay a certificate or theta witness against a graph, system or channel.
    Verify { certificate: PathBuf, system: PathBuf },
    /// Zero-error capacity bounds for a channel, system or graph.
    Capacity { file: PathBuf },
    /// Run one reproduction case, or `all`.
    Reproduce {
        #[arg(required_unless_present = "list")]
        case: Option<String>,
        /// List case ids and exit.
        #[arg(long)]
        list: bool,
    },
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: Tolerance,
    pub seed: u64,
    pub effort: Effort,
    pub budget: Option<SearchBudget>,
    pub exec: Exec,
    pub timing: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seed: 0,
            effort: Effort::Quick,
            budget: None,
            exec: Exec::default(),
            timing: false,
        }
    }
}

impl Settings {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let tol = match cli.tol {
            Some(t) => Tolerance::uniform(t)?,
            None => Tolerance::default(),
        };
        let exec = if cli.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        };
        let effort: Effort = cli.effort.into();
        let budget = match (cli.starts, cli.budget) {
            (None, None) => None,
            (starts, iters) => {
                let base = effort.budget(exec);
                let starts = starts.unwrap_or(base.starts);
                let iters = iters.unwrap_or(base.max_iter);
                if starts == 0 || iters == 0 {
                    return Err(CliError::Usage("--starts and --budget must be positive".into()));
                }
                Some(SearchBudget::new(starts, iters).with_exec(exec))
            }
        };
        Ok(Self {
            tol,
            seed: cli.seed,
            effort,
            budget,
            exec,
            timing: !cli.no_timestamp,
        })
    }
}

/// A finished command: the report and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let settings = Settings::from_cli(cli)?;
    let (name, mut outcome) = match &cli.command {
        Command::Theta { file } => ("theta", commands::theta(&load_input(file, &settings.tol)?, &settings)?),
        Command::Params { file } => ("params", commands::params(&load_input(file, &settings.tol)?, &settings)?),
        Command::Verify {
            certificate,
            system,
        } => (
            "verify",
            commands::verify(
                &load_input(certificate, &settings.tol)?,
                &load_input(system, &settings.tol)?,
                &settings,
            )?,
        ),
        Command::Capacity { file } => (
            "capacity",
            commands::capacity(&load_input(file, &settings.tol)?, &settings)?,
        ),
        Command::Reproduce { case, list } => {
            if *list {
                let ids: Vec<Value> = reproduce::cases()
                    .iter()
                    .map(|c| serde_json::json!({"id": c.id, "summary": c.summary}))
                    .collect();
                ("reproduce", Outcome {
                    report: Value::Array(ids),
                    pass: true,
                })
            } else {
                let case = case.as_deref().unwrap_or("all");
                let suite = reproduce::run_cases(case, &settings)?;
                let pass = suite.passed();
                ("reproduce", Outcome {
                    report: serde_json::to_value(&suite).expect("suite serialises"),
                    pass,
                })
            }
        }
    };
    let mut envelope = serde_json::Map::new();
    envelope.insert("command".into(), name.into());
    envelope.insert("pass".into(), outcome.pass.into());
    envelope.insert("seed".into(), settings.seed.into());
    envelope.insert("report".into(), outcome.report);
    if settings.timing {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        envelope.insert("generated_unix".into(), secs.into());
    }
    outcome.report = Value::Object(envelope);
    Ok(outcome)
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialise");
    s.push('\n');
    s
}

/// Run, print and optionally save; returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(outcome) => {
            let text = render(&outcome.report);
            print!("{text}");
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
