//! Command-line front end: argument grammar, report assembly and
//! rendering, and the runtime verification suite.

use std::fmt;
use std::io::Write;

pub mod args;
pub mod exec;
pub mod output;
pub mod verify;

use args::{Cli, Format};

/// Failures mapped to exit statuses: usage problems exit 2, computation
/// and IO problems exit 1.
#[derive(Debug)]
pub enum CliError {
    Core(cayley_qmc::Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<cayley_qmc::Error> for CliError {
    fn from(e: cayley_qmc::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Renders one executed command in the requested format.
pub fn render(out: &exec::CommandOutput, format: Format) -> String {
    match format {
        Format::Json => out.report.to_json(),
        Format::Text => out.text.clone().unwrap_or_else(|| out.report.to_text()),
        Format::Csv => out.csv.clone().unwrap_or_else(|| out.report.to_flat_csv()),
    }
}

/// Executes the parsed command, writes the report to stdout or `--out`,
/// and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let (format, out_path) = output_opts(&cli.command);
    let executed = exec::execute(&cli.command)?;
    let rendered = render(&executed, format);
    match out_path {
        Some(path) => std::fs::write(path, rendered)?,
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(rendered.as_bytes())?;
        }
    }
    Ok(executed.exit)
}

fn output_opts(cmd: &args::Command) -> (Format, Option<std::path::PathBuf>) {
    use args::Command::*;
    let o = match cmd {
        Critical(a) => &a.output,
        FixedPoints(a) => &a.output,
        Trajectory(a) => &a.output,
        Boundary(a) => &a.output,
        Evaluate(a) => &a.output,
        Correlation(a) => &a.output,
        Gap(a) => &a.output,
        PhaseDiagram(a) => &a.output,
        Verify(a) => &a.output,
    };
    (o.format, o.out.clone())
}
