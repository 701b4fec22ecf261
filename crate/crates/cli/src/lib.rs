//! `ctl`: command-line front end for Archimedean tail analysis.
//!
//! [`run`] parses arguments, executes one command and returns everything the
//! process should print together with its exit code, so the binary and the
//! tests share one code path.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
pub mod format;
pub mod grids;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use copula_tail::Error;

pub use args::{Cli, OutputFormat};
pub use commands::grid::{read_grid_csv, GridRow};
pub use grids::Env;
pub use report::{Quantity, ReportDocument, Status, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// A command failure and the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// Numeric breakdown, reported with code 4 under `--strict`.
    pub numeric: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
            numeric: false,
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_FAILURE,
            message: message.into(),
            numeric: false,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, numeric) = match e {
            Error::Parse { .. }
            | Error::InvalidParameter { .. }
            | Error::Domain(_)
            | Error::InfiniteInverse
            | Error::Precondition(_)
            | Error::Format(_) => (EXIT_USAGE, false),
            Error::Capability(_) | Error::UnsupportedSampling(_) => (EXIT_UNSUPPORTED, false),
            Error::RootFinding(_) | Error::DegenerateHazard { .. } => (EXIT_FAILURE, true),
            Error::Io(_) => (EXIT_FAILURE, false),
        };
        CliError {
            code,
            message,
            numeric,
        }
    }
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation. `argv` includes the program name.
pub fn run<I, S>(argv: I, env: &Env) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let invocation = report::Invocation {
        argv: argv
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect(),
        env: env.vars().clone(),
    };
    let strict = cli.strict;
    match commands::execute(&cli, env, invocation) {
        Ok(out) => {
            let stdout = out.render(cli.format);
            if strict && !out.unconverged.is_empty() {
                Outcome {
                    code: EXIT_CONVERGENCE,
                    stdout,
                    stderr: format!("ctl: --strict: {}\n", out.unconverged.join("; ")),
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout,
                    stderr: String::new(),
                }
            }
        }
        Err(e) => Outcome {
            code: if strict && e.numeric {
                EXIT_CONVERGENCE
            } else {
                e.code
            },
            stdout: String::new(),
            stderr: format!("ctl: {}\n", e.message),
        },
    }
}
