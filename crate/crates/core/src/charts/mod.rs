//! Rational changes of variables, affine gauges, canonical equations and
//! index reduction.

pub mod canonical;
pub mod chart;
pub mod dominant;
pub mod elementary;
pub mod statepoly;
pub mod system;

pub use canonical::{extract_canonical, necessary_condition, necessary_condition_with, reduce_index, CanonicalEquation};
pub use chart::{apply_chart, apply_gauge, parse_frac, AffineGauge, RationalChart};
pub use dominant::{dominant_part, DominantPart};
pub use elementary::{elementary_chain, elementary_chain_on};
pub use statepoly::StatePoly;
pub use system::System;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("forward and inverse maps do not compose to the identity")]
    NotInverse,
    #[error("chart variables do not match the system")]
    VariableMismatch,
    #[error("chart has identically vanishing Jacobian")]
    SingularChart,
    #[error("gauge scale vanishes")]
    ZeroScale,
    #[error("not a canonical equation: {0}")]
    NotCanonical(String),
    #[error("constant term a of the canonical equation vanishes")]
    ZeroA,
    #[error("right-hand side is not holomorphic at the point")]
    NotHolomorphic,
    #[error("dominant part has non-positive weighted degree")]
    DegenerateTop,
    #[error("elementary chain requires b = 0")]
    NonZeroB,
    #[error("index {0} too low for reduction")]
    IndexTooLow(u32),
}
