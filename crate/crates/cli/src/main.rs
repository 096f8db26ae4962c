mod commands;
mod docs;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use genpos_core::Tolerance;
use serde_json::Value;

use error::CliError;

/// Default seed of every randomized subcommand.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Parser)]
#[command(name = "genpos", version, about = "Incidence geometry, ruled quadrics and general-position certificates")]
struct Cli {
    /// Factor applied to the relative rank threshold (default 1e-9).
    #[arg(long, global = true, default_value_t = 1.0)]
    tol: f64,
    #[arg(long, global = true, env = "GENPOS_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Document)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Document,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension of an incidence stratum, optionally checked numerically.
    Stratum(commands::stratum::Args),
    /// Quadric through three skew lines given by six points.
    Quadric(commands::quadric::Args),
    /// Lines meeting four segments.
    Transversals(commands::transversals::Args),
    /// Subdivide and perturb a PL map, emitting a certificate.
    Perturb(commands::perturb::Args),
    /// Wavefront OBJ export of quadrics, segments and lines.
    Export(commands::export::Args),
    /// Skewness of flats and the bridge flat of three skew flats.
    Skew(commands::skew::Args),
}

/// Result of a subcommand: a document, its table rendering, and an optional
/// failure reported after the output is written.
pub struct Output {
    pub document: Value,
    pub table: String,
    pub failure: Option<CliError>,
    /// Printed instead of either rendering when set.
    pub raw: Option<String>,
}

impl Output {
    pub fn ok(document: Value, table: String) -> Self {
        Self { document, table, failure: None, raw: None }
    }

    pub fn with_failure(document: Value, table: String, failure: Option<CliError>) -> Self {
        Self { document, table, failure, raw: None }
    }

    pub fn raw(text: String) -> Self {
        Self { document: Value::Null, table: String::new(), failure: None, raw: Some(text) }
    }
}

pub struct Context {
    pub tol: Tolerance,
    pub seed: u64,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let tol = Tolerance::default().scaled(cli.tol).map_err(|e| CliError::Parse(format!("--tol: {e}")))?;
    let ctx = Context { tol, seed: cli.seed };
    match &cli.command {
        Command::Stratum(a) => commands::stratum::run(a, &ctx),
        Command::Quadric(a) => commands::quadric::run(a, &ctx),
        Command::Transversals(a) => commands::transversals::run(a, &ctx),
        Command::Perturb(a) => commands::perturb::run(a, &ctx),
        Command::Export(a) => commands::export::run(a, &ctx),
        Command::Skew(a) => commands::skew::run(a, &ctx),
    }
}

pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn write_text(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let text = match (&out.raw, cli.format) {
            (Some(raw), _) => raw.clone(),
            (None, Format::Document) => render(&out.document),
            (None, Format::Table) => out.table.clone(),
        };
        write_text(cli.out.as_ref(), &text)?;
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("genpos: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
