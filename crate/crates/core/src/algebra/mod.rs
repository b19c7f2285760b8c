//! Exact algebra: rationals, multivariate polynomials and fractions over Q,
//! the total derivation on jets, univariate tools and the expression parser.

pub mod diff;
pub mod expr;
pub mod frac;
pub mod gcd;
pub mod poly;
pub mod rat;
pub mod surd;
pub mod univariate;
pub mod var;

pub use diff::{DiffFrac, DiffPoly, Rule, Rules};
pub use frac::Frac;
pub use poly::{MPoly, Monomial};
pub use rat::{rat, ratio, Rat};
pub use var::Var;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parameter action on `{0}` is not polynomial")]
    NonPolynomialAction(String),
    #[error("condition is not linear in `{0}`")]
    NotLinearIn(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
}
