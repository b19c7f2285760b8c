//! Per-family analysis: condition derivation from scripts, symmetries,
//! first integrals, scalar reductions and equivalence maps.

pub mod catalog;
pub mod conditions;
pub mod equivalence;
pub mod family;
pub mod integrals;
pub mod reductions;
pub mod scripts;

pub use catalog::{table1, table1_entry, table2, CatalogEntry, Table2Entry};
pub use conditions::{apply_symmetry, derive_family_conditions, run_script, ConditionReport, ConditionStep, Verdict};
pub use equivalence::{equivalence_map, EquivalenceMap};
pub use family::Family;
pub use catalog::table1_entry as catalog_entry;
pub use integrals::{verify_first_integral, FirstIntegral};
pub use reductions::{second_order_reduction, Reduction, ScalarOde};
pub use scripts::{family_script, Script, Step};

use thiserror::Error;

use crate::algebra::diff::derive_n;
use crate::algebra::{AlgebraError, Frac, MPoly, Var};
use crate::charts::{parse_frac, ChartError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("system does not have the normal form of {0}")]
    ShapeMismatch(String),
    #[error("transported system differs from the image form: {0}")]
    NotASymmetry(String),
    #[error("conditions not satisfied: {0}")]
    ConditionsNotSatisfied(String),
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("no {what} for family {family}")]
    Unsupported { what: &'static str, family: String },
    #[error("expected index {expected}, found {found} at {source_name}")]
    UnexpectedIndex { expected: u32, found: u32, source_name: String },
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Parses an expression known to be well formed.
pub(crate) fn frac(src: &str) -> Frac {
    parse_frac(src).unwrap_or_else(|e| panic!("built-in expression {src}: {e}"))
}

/// Highest jet in which `p` is linear; ties go to the later name.
pub fn leading_jet(p: &MPoly) -> Option<Var> {
    p.vars().into_iter().filter(|v| p.coeffs_in(*v).len() == 2).max_by_key(|v| (v.order(), v.name()))
}

/// Numerator of `(q'' - 6 q^2)''`.
pub fn painleve_one_condition(q: &Frac) -> MPoly {
    let inner = derive_n(q, 2) - q * q * Frac::from_int(6);
    let c = derive_n(&inner, 2);
    c.numer().clone()
}
