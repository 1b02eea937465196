//! Command-line front end: argument parsing, dispatch and report output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Parser, Subcommand};

use config::{Format, RunConfig};
use error::CliError;
use report::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "whittaker", version, about = "q-deformed and classical gl(n) Whittaker functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the q-Whittaker function (direct, recursive or character form)
    Qpsi(RunConfig),
    /// Exact q-Toda eigenvalue check with formal spectral variables
    Eigen(RunConfig),
    /// Classical function by Givental quadrature, with a finite-difference eigen-check
    Givental(RunConfig),
    /// Scaled q-values against the classical function over an epsilon list
    Limit(RunConfig),
    /// q-factorial asymptotics and the eta modular identity
    Asymptotics(RunConfig),
    /// Expansion of the q-Toda Hamiltonians around the classical ones
    Hamlimit(RunConfig),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Qpsi(_) => "qpsi",
            Command::Eigen(_) => "eigen",
            Command::Givental(_) => "givental",
            Command::Limit(_) => "limit",
            Command::Asymptotics(_) => "asymptotics",
            Command::Hamlimit(_) => "hamlimit",
        }
    }

    fn config(&self) -> &RunConfig {
        match self {
            Command::Qpsi(c)
            | Command::Eigen(c)
            | Command::Givental(c)
            | Command::Limit(c)
            | Command::Asymptotics(c)
            | Command::Hamlimit(c) => c,
        }
    }
}

/// Resolves the config and computes the report, inside a sized pool if requested.
pub fn execute(command: &Command) -> Result<(RunConfig, Report), CliError> {
    let cfg = command.config().clone().resolve()?;
    if let Some(tag) = &cfg.subcommand {
        if tag != command.name() {
            return Err(CliError::invalid(format!("config is for subcommand {tag:?}, not {:?}", command.name())));
        }
    }
    let run = || match command {
        Command::Qpsi(_) => commands::qpsi(&cfg),
        Command::Eigen(_) => commands::eigen(&cfg),
        Command::Givental(_) => commands::givental(&cfg),
        Command::Limit(_) => commands::limit(&cfg),
        Command::Asymptotics(_) => commands::asymptotics(&cfg),
        Command::Hamlimit(_) => commands::hamlimit(&cfg),
    };
    let report = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::invalid(format!("cannot start {n} threads: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok((cfg, report))
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.format() {
        Format::Json => report.write_json(&mut out)?,
        Format::Csv => report.write_csv(&mut out)?,
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Ok => 0,
        Status::Failed => 2,
    }
}

/// Runs the program on `args` and returns the exit status:
/// 0 on success, 1 on invalid input, 2 when a verification fails.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|(cfg, report)| emit(&cfg, &report).map(|_| report.status));
    match result {
        Ok(status) => status_code(status),
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}
