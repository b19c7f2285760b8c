//! Command-line front end: spec parsing, command dispatch and JSON reports.
//!
//! Every invocation prints one JSON document on standard output. Exit codes:
//! 0 success, 2 parse or usage error, 3 shape mismatch, 4 numeric failure,
//! 5 inconclusive monodromy.

pub mod args;
pub mod commands;
pub mod spec;

use std::path::{Path, PathBuf};

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use args::{Cli, Command};
pub use commands::run_command;
pub use spec::{parse_system_spec, Coefficient, SystemSpec};

use crate::algebra::AlgebraError;
use crate::charts::ChartError;
use crate::numerics::NumericError;
use crate::pipelines::PipelineError;

pub const SCHEMA: &str = "pql.report.v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SHAPE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared symbol `{name}` at line {line}, column {col}")]
    UndeclaredSymbol { name: String, line: usize, col: usize },
    #[error("`{name}` at line {line} must be bound to a concrete integer")]
    NonIntegerFamilyParameter { name: String, line: usize },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::UndeclaredSymbol { .. }
            | CliError::NonIntegerFamilyParameter { .. }
            | CliError::Usage(_)
            | CliError::Io(_) => EXIT_PARSE,
            CliError::Pipeline(PipelineError::Algebra(AlgebraError::Parse { .. }))
            | CliError::Pipeline(PipelineError::UnknownFamily(_))
            | CliError::Numeric(NumericError::UnboundSymbol(_))
            | CliError::Numeric(NumericError::Algebra(AlgebraError::Parse { .. })) => EXIT_PARSE,
            CliError::Pipeline(_) | CliError::Chart(_) => EXIT_SHAPE,
            CliError::Numeric(NumericError::SystemMismatch(_) | NumericError::ConditionsViolated { .. }) => EXIT_SHAPE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::UndeclaredSymbol { .. } => "UndeclaredSymbol",
            CliError::NonIntegerFamilyParameter { .. } => "NonIntegerFamilyParameter",
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
            CliError::Pipeline(_) => "Pipeline",
            CliError::Chart(_) => "Chart",
            CliError::Numeric(_) => "Numeric",
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Parse { line, col, .. } | CliError::UndeclaredSymbol { line, col, .. } => {
                v["line"] = json!(line);
                v["col"] = json!(col);
            }
            CliError::NonIntegerFamilyParameter { line, .. } => v["line"] = json!(line),
            _ => {}
        }
        v
    }
}

/// Working precision of the integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    /// Reads `PQL_PRECISION`; unset means double.
    pub fn from_env() -> Result<Precision, CliError> {
        match std::env::var("PQL_PRECISION") {
            Err(_) => Ok(Precision::Double),
            Ok(v) => match v.trim() {
                "" | "double" => Ok(Precision::Double),
                "extended" => Ok(Precision::Extended),
                other => Err(CliError::Usage(format!("PQL_PRECISION must be double or extended, not `{other}`"))),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    /// SHA-256 of the spec text (or of the command line when there is none).
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, input: &str, result: Value) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            input_digest: digest(input),
            source: None,
            result,
            error: None,
            warnings: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    pub fn failure(command: &str, input: &str, err: &CliError) -> Report {
        Report {
            error: Some(err.to_json()),
            exit_code: err.exit_code(),
            ..Report::new(command, input, Value::Null)
        }
    }
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Captured result of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn render<T: Serialize>(v: &T, pretty: bool) -> String {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.expect("reports serialize")
}

/// Parses arguments and runs the command.
pub fn execute<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    execute_cli(&cli)
}

pub fn execute_cli(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let precision = match Precision::from_env() {
        Ok(p) => p,
        Err(e) => return finish(Report::failure(name, "", &e), cli.pretty),
    };
    match cli.command.spec_path() {
        Some(path) if path.is_dir() => run_batch(cli, path, precision),
        Some(path) => {
            let report = match std::fs::read_to_string(path) {
                Ok(text) => report_for(&cli.command, &text, precision),
                Err(e) => Report::failure(name, "", &CliError::Io(format!("{}: {e}", path.display()))),
            };
            finish(report, cli.pretty)
        }
        None => finish(report_for(&cli.command, "", precision), cli.pretty),
    }
}

fn report_for(cmd: &Command, text: &str, precision: Precision) -> Report {
    let input = if cmd.spec_path().is_some() { text.to_string() } else { cmd.canonical_line() };
    match run_command(cmd, text, precision) {
        Ok(mut r) => {
            r.input_digest = digest(&input);
            r
        }
        Err(e) => Report::failure(cmd.name(), &input, &e),
    }
}

fn finish(report: Report, pretty: bool) -> Outcome {
    let stderr = report.error.as_ref().map(|e| format!("error: {}\n", e["message"].as_str().unwrap_or(""))).unwrap_or_default();
    Outcome { stdout: render(&report, pretty) + "\n", stderr, code: report.exit_code }
}

/// Runs the command on every `*.spec` file of a directory, `--jobs` at a time.
fn run_batch(cli: &Cli, dir: &Path, precision: Precision) -> Outcome {
    let name = cli.command.name();
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "spec"))
            .collect(),
        Err(e) => return finish(Report::failure(name, "", &CliError::Io(format!("{}: {e}", dir.display()))), cli.pretty),
    };
    files.sort();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return finish(Report::failure(name, "", &CliError::Usage(e.to_string())), cli.pretty),
    };
    let reports: Vec<Report> = pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                let mut r = match std::fs::read_to_string(p) {
                    Ok(text) => report_for(&cli.command, &text, precision),
                    Err(e) => Report::failure(name, "", &CliError::Io(format!("{}: {e}", p.display()))),
                };
                r.source = Some(p.display().to_string());
                r
            })
            .collect()
    });
    let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(EXIT_OK);
    let failed = reports.iter().filter(|r| r.error.is_some()).count();
    let doc = json!({
        "schema": SCHEMA,
        "command": name,
        "batch": dir.display().to_string(),
        "reports": reports,
    });
    let stderr = if failed > 0 { format!("error: {failed} of {} specs failed\n", reports.len()) } else { String::new() };
    Outcome { stdout: render(&doc, cli.pretty) + "\n", stderr, code }
}
