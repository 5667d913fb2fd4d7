//! `bergman`: assemble, inspect and validate Toeplitz operators on the Bergman
//! space, and run the named experiments.

mod config;
mod experiments;
mod output;
mod schema;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bergman_toeplitz::symbols::assemble_with;
use bergman_toeplitz::{FormOptions, OperatorJson, Symbol, TruncatedOperator};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use config::{FlagConfig, Format, RunConfig};
use output::{emit, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error in {source_name} at line {line}, column {column}, path '{path}': {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 3,
            _ => 2,
        }
    }
}

impl From<bergman_toeplitz::Error> for CliError {
    fn from(e: bergman_toeplitz::Error) -> Self {
        use bergman_toeplitz::Error as E;
        match e {
            E::NoConvergence { .. } | E::NonFinite(_) => CliError::Numeric(e.to_string()),
            other => CliError::Invalid(vec![other.to_string()]),
        }
    }
}

/// Deserializes JSON, reporting the failing line, column and field path.
pub fn parse_json<T: DeserializeOwned>(text: &str, source: &Path) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        CliError::Parse {
            source_name: source.display().to_string(),
            line: inner.line(),
            column: inner.column(),
            path,
            message: inner.to_string(),
        }
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses a symbol without checking its invariants.
pub fn parse_symbol(text: &str, source: &Path) -> Result<Symbol, CliError> {
    parse_json(text, source).map_err(|e| match e {
        CliError::Parse { line: 0, .. } => schema::locate_symbol_error(text, source).unwrap_or(e),
        other => other,
    })
}

/// Reads a symbol file and checks its invariants.
pub fn read_symbol(path: &Path) -> Result<Symbol, CliError> {
    let s = parse_symbol(&read_text(path)?, path)?;
    let v = s.violations();
    if v.is_empty() {
        Ok(s)
    } else {
        Err(CliError::Invalid(v))
    }
}

#[derive(Debug, Parser)]
#[command(name = "bergman", version, about = "Toeplitz operators on the Bergman space of the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Truncation dimension N.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Parameter p of the k-Carleson norms, in (0, 1).
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Experiment parameter `key=value`; repeatable.
    #[arg(long = "param", global = true, value_parser = config::parse_param)]
    params: Vec<(String, String)>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the truncated matrix of a symbol and write it as JSON.
    Assemble { symbol: PathBuf },
    /// Run a named experiment and emit its table.
    Experiment { name: String },
    /// Check a symbol file against the schema and the support invariants.
    Validate { symbol: PathBuf },
    /// Operator norm of a symbol file or an operator JSON file.
    Norm { input: PathBuf },
    /// Leading singular values of a symbol file or an operator JSON file.
    Svd {
        input: PathBuf,
        /// How many singular values; all of them when absent.
        #[arg(long)]
        count: Option<usize>,
    },
}

fn operator_from_file(path: &Path, cfg: &RunConfig) -> Result<TruncatedOperator, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = parse_json(&text, path)?;
    if value.get("type").is_some() {
        let s = read_symbol(path)?;
        Ok(assemble_with(&s, cfg.dim, &FormOptions::new(cfg.n_r, cfg.n_theta)?)?)
    } else {
        let doc: OperatorJson = parse_json(&text, path)?;
        Ok(TruncatedOperator::from_json(&doc)?)
    }
}

fn op_norm(t: &TruncatedOperator, cfg: &RunConfig) -> Result<f64, CliError> {
    Ok(t.op_norm_with(cfg.norm_tol, cfg.seed, cfg.max_iter)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref().map(config::load_file).transpose()?;
    let flags = FlagConfig {
        dim: cli.dim,
        p: cli.p,
        seed: cli.seed,
        format: cli.format,
        out: cli.out,
        params: cli.params,
    };
    let cfg = RunConfig::resolve(file, flags)?;
    match cli.command {
        Command::Assemble { symbol } => {
            let s = read_symbol(&symbol)?;
            let t = assemble_with(&s, cfg.dim, &FormOptions::new(cfg.n_r, cfg.n_theta)?)?;
            let mut text = serde_json::to_string_pretty(&t.to_json()).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            let norm = op_norm(&t, &cfg)?;
            emit(&text, cfg.out.as_deref())?;
            if cfg.out.is_some() {
                println!("op_norm = {norm:.16e}");
            } else {
                eprintln!("op_norm = {norm:.16e}");
            }
        }
        Command::Experiment { name } => {
            let table = experiments::run(&name, &cfg)?;
            emit(&table.render(cfg.format)?, cfg.out.as_deref())?;
        }
        Command::Validate { symbol } => {
            let s = parse_symbol(&read_text(&symbol)?, &symbol)?;
            let v = s.violations();
            if !v.is_empty() {
                return Err(CliError::Invalid(v));
            }
            println!("OK: {}", s.class_name());
        }
        Command::Norm { input } => {
            let t = operator_from_file(&input, &cfg)?;
            let mut table = Table::new(&["dim", "op_norm"]);
            table.push(vec![t.dim().into(), op_norm(&t, &cfg)?.into()]);
            emit(&table.render(cfg.format)?, cfg.out.as_deref())?;
        }
        Command::Svd { input, count } => {
            let t = operator_from_file(&input, &cfg)?;
            let sv = t.singular_values(count.unwrap_or(t.dim()))?;
            let mut table = Table::new(&["m", "singular_value"]);
            for (m, v) in sv.iter().enumerate() {
                table.push(vec![(m + 1).into(), (*v).into()]);
            }
            emit(&table.render(cfg.format)?, cfg.out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
