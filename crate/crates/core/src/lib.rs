//! Painlevé analysis of quadratic planar systems: exact algebra, the
//! classification of quadratic parts, chart machinery, per-family condition
//! pipelines, complex-path numerics and a command-line front end.

pub mod algebra;
pub mod charts;
pub mod cli;
pub mod numerics;
pub mod pipelines;
pub mod quadclass;
