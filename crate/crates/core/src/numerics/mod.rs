//! Complex-domain integration along paths, chart switching at poles,
//! monodromy loops and numerical residual checks.

pub mod instance;
pub mod integrate;
pub mod monodromy;
pub mod path;
pub mod real;
pub mod residual;

pub use instance::{GaussPoly, InstanceChart, NumericInstance};
pub use integrate::{
    integrate_path, integrate_path_f64, read_trace, write_trace, ChartSwitch, IntegrationOptions, StepStats,
    TraceRecord, Trajectory,
};
pub use monodromy::{
    bracket_singularity, monodromy_along, monodromy_batch, monodromy_test, poles_near_path, DetectedSingularity, LoopSpec,
    MonodromyReport, RadiusBracket, SingularityKind, Verdict,
};
pub use path::{ComplexPath, Segment};
pub use real::{Dd, Real};
pub use residual::{
    check_rules, equivalence_residual, first_integral_drift, reduction_residual, DriftReport, ResidualReport,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::charts::ChartError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("symbol `{0}` has no binding")]
    UnboundSymbol(String),
    #[error("expected a planar system, got dimension {0}")]
    NotPlanar(usize),
    #[error("tolerance {0:e} outside [1e-13, 1e-6]")]
    ToleranceOutOfRange(f64),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("step size collapsed near t = {t}; suspected non-pole singularity")]
    StepCollapse { t: Complex64 },
    #[error("non-finite state near t = {t}")]
    NonFiniteState { t: Complex64 },
    #[error("step budget exhausted near t = {t}")]
    StepBudgetExhausted { t: Complex64 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed trace line {0}")]
    InvalidTrace(usize),
    #[error("system mismatch: {0}")]
    SystemMismatch(String),
    #[error("map singular at every sample point")]
    MapSingular,
    #[error("bindings violate `{condition}` by {residual:e}")]
    ConditionsViolated { condition: String, residual: f64 },
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
