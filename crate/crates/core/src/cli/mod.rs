//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 usage,
//! input or parse error.

mod args;
mod commands;
pub mod output;

pub use args::{Cli, Command, Format};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;

use crate::error::Error;
use crate::multiport::touchstone::parse_touchstone;
use crate::multiport::{ScatteringMatrix, DEFAULT_PASSIVITY_TOL};
use crate::symmetric3::{DEFAULT_SINGULAR_TOL, DEFAULT_SYMMETRY_TOL};
use crate::synthesis::{DEFAULT_MULTIPLEX_TOL, DEFAULT_REACTIVE_TOL};
use args::FileConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Numerical tolerances shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub passivity: f64,
    pub symmetry: f64,
    pub singular: f64,
    pub reactive: f64,
    pub multiplex: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            passivity: DEFAULT_PASSIVITY_TOL,
            symmetry: DEFAULT_SYMMETRY_TOL,
            singular: DEFAULT_SINGULAR_TOL,
            reactive: DEFAULT_REACTIVE_TOL,
            multiplex: DEFAULT_MULTIPLEX_TOL,
        }
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    /// Bad arguments or unreadable/ill-formed input.
    Input(String),
    /// Valid input that fails a physical or numerical check.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::PortCount { .. } | Error::InvalidInput(_) | Error::PortIndex { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Flag values after merging the optional config file.
#[derive(Debug, Clone)]
pub(crate) struct Settings {
    pub tol: Tolerances,
    pub file_config: FileConfig,
}

impl Settings {
    fn pick<T: Clone>(flag: Option<T>, file: &Option<T>) -> Option<T> {
        flag.or_else(|| file.clone())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(outcome) => {
            if outcome.failures.is_empty() {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "verification failed: {}", outcome.failures.join("; "));
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Failed checks of a command that still produced a report.
pub(crate) struct Outcome {
    pub failures: Vec<String>,
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let file_config = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let t = &cli.tol;
    let f = &file_config;
    let tol = Tolerances {
        passivity: Settings::pick(t.tol_passivity, &f.tol_passivity).unwrap_or(DEFAULT_PASSIVITY_TOL),
        symmetry: Settings::pick(t.tol_symmetry, &f.tol_symmetry).unwrap_or(DEFAULT_SYMMETRY_TOL),
        singular: Settings::pick(t.tol_singular, &f.tol_singular).unwrap_or(DEFAULT_SINGULAR_TOL),
        reactive: Settings::pick(t.tol_reactive, &f.tol_reactive).unwrap_or(DEFAULT_REACTIVE_TOL),
        multiplex: Settings::pick(t.tol_multiplex, &f.tol_multiplex).unwrap_or(DEFAULT_MULTIPLEX_TOL),
    };
    for (name, v) in [
        ("passivity", tol.passivity),
        ("symmetry", tol.symmetry),
        ("singular", tol.singular),
        ("reactive", tol.reactive),
        ("multiplex", tol.multiplex),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::Input(format!("--tol-{name} must be finite and non-negative, got {v}")));
        }
    }
    let format = Settings::pick(cli.format, &f.format).unwrap_or(Format::Json);
    let out = Settings::pick(cli.out.clone(), &f.out);
    let settings = Settings { tol, file_config };

    let (report, outcome) = commands::dispatch(cli.command, &settings)?;
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write output: {e}")))?,
    }
    Ok(outcome)
}

fn load_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
}

/// Port count implied by a `.sNp` extension; 3 otherwise.
fn ports_from_extension(path: &Path) -> usize {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .and_then(|e| e.strip_prefix('s')?.strip_suffix('p')?.parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or(3)
}

pub(crate) fn read_networks(path: &PathBuf) -> CliResult<Vec<ScatteringMatrix>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_touchstone(&text, ports_from_extension(path))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Grid from `"start:stop:step"` (inclusive) or a comma-separated list.
pub(crate) fn parse_grid(spec: &str, what: &str) -> CliResult<Vec<f64>> {
    let bad = |msg: String| CliError::Input(format!("{what} \"{spec}\": {msg}"));
    let num = |s: &str| -> CliResult<f64> {
        let v: f64 = s.trim().parse().map_err(|_| bad(format!("cannot parse \"{}\"", s.trim())))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite".into()))
        }
    };
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step".into()));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step == 0.0 {
            return Err(bad("step must be non-zero".into()));
        }
        let span = (stop - start) / step;
        if span < -1e-9 {
            return Err(bad("range is empty".into()));
        }
        let n = (span + 1e-9).floor() as usize + 1;
        (0..n).map(|i| start + i as f64 * step).collect()
    } else {
        spec.split(',').filter(|s| !s.trim().is_empty()).map(num).collect::<CliResult<_>>()?
    };
    if grid.is_empty() {
        return Err(bad("range is empty".into()));
    }
    Ok(grid)
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
