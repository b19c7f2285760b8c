use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

#[derive(Clone, Debug, Parser)]
#[command(name = "pql", version, about = "Classification and single-valuedness checks for planar polynomial systems")]
pub struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads when the spec argument is a directory.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Quadratic part, index profile and normalizing map.
    Classify { spec: PathBuf },
    /// Necessary conditions for the family's normal form.
    Conditions {
        spec: PathBuf,
        /// Family label, e.g. `VIII(3)` or `VIII` (n taken from the spec).
        #[arg(long)]
        family: Option<String>,
    },
    /// Built-in normal forms.
    Catalog {
        /// 1: systems by family; 2: quadratic representatives.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: Option<u8>,
        /// n for the IX row of the representatives.
        #[arg(long, default_value_t = 2)]
        n_ix: i64,
        /// n for the VIII row of the representatives.
        #[arg(long, default_value_t = 1)]
        n_viii: i64,
    },
    /// Checks that `H` is a first integral.
    IntegralCheck {
        spec: PathBuf,
        #[arg(long = "H", value_name = "EXPR")]
        h: String,
        /// Identity `c = 0` on the coefficients, e.g. `a'`. Repeatable.
        #[arg(long, value_name = "COND")]
        assume: Vec<String>,
    },
    /// Integrates around a circle and compares the returning state.
    Monodromy {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Initial state `y0,z0` at the base point.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Writes one line per accepted step to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Symbolic check of the family's equivalence map, plus a numeric
    /// residual when the spec has numeric coefficients.
    Equivalence {
        spec: PathBuf,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "1/2,1/2", allow_hyphen_values = true)]
        init: String,
        /// Straight path `t0,t1`.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        path: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Conditions { .. } => "conditions",
            Command::Catalog { .. } => "catalog",
            Command::IntegralCheck { .. } => "integral-check",
            Command::Monodromy { .. } => "monodromy",
            Command::Equivalence { .. } => "equivalence",
        }
    }

    pub fn spec_path(&self) -> Option<&Path> {
        match self {
            Command::Classify { spec }
            | Command::Conditions { spec, .. }
            | Command::IntegralCheck { spec, .. }
            | Command::Monodromy { spec, .. }
            | Command::Equivalence { spec, .. } => Some(spec),
            Command::Catalog { .. } => None,
        }
    }

    /// Stable text standing in for the input of commands without a spec.
    pub fn canonical_line(&self) -> String {
        match self {
            Command::Catalog { table, n_ix, n_viii } => {
                format!("catalog table={} n_ix={n_ix} n_viii={n_viii}", table.map_or("all".to_string(), |t| t.to_string()))
            }
            other => other.name().to_string(),
        }
    }
}
