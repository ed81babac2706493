//! Command-line front end for `zealot-core`.
//!
//! Every subcommand produces an [`Envelope`]: a table together with the
//! command, its fully resolved parameters, the seed (for `simulate`) and the
//! tool version. Running the command again with those parameters regenerates
//! the same bytes.

pub mod args;
pub mod commands;
pub mod envelope;

use std::ffi::OsString;
use std::io::{self, IsTerminal, Write};

use clap::{ColorChoice, CommandFactory, FromArgMatches};

pub use args::{Cli, Command, Format};
pub use commands::execute;
pub use envelope::{Cell, Envelope};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] zealot_core::Error),
    #[error("{path}: {source}")]
    Input { path: String, source: zealot_core::Error },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn color_disabled() -> bool {
    std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty())
}

/// Parses `argv` (program name first) into a [`Cli`]. `Err` carries clap's
/// message, exit status included, for `--help` and usage errors alike.
pub fn parse<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if color_disabled() {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = Cli::command().color(color).try_get_matches_from(argv)?;
    Cli::from_arg_matches(&matches)
}

/// Runs one invocation against the given streams and returns the exit code:
/// 0 on success, 2 on a usage error, 1 on a numerical, domain or I/O error.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = if use_color() {
                e.render().ansi().to_string()
            } else {
                e.render().to_string()
            };
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    match emit(&cli, stdout) {
        Ok(()) => 0,
        // reader went away, e.g. `| head`
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", error_label());
            e.exit_code()
        }
    }
}

fn use_color() -> bool {
    !color_disabled() && io::stderr().is_terminal()
}

fn error_label() -> &'static str {
    if use_color() {
        "\x1b[1;31merror\x1b[0m"
    } else {
        "error"
    }
}

fn emit(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let envelope = execute(&cli.command)?;
    let output = cli.command.output();
    let text = envelope.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// [`run_with`] on the process's own streams.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = run_with(argv, &mut out, &mut io::stderr());
    let _ = out.flush();
    code
}
