//! Quadratic homogeneous planar fields: radial orbits, the ratio equation
//! and its indices, the univalence test, and matching against the table of
//! univalent representatives.

pub mod diophantine;
pub mod linear;
pub mod orbits;
pub mod ratio;
pub mod table2;

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rat::{fmt_rat, rat, Rat};
use crate::algebra::surd::Surd;
use crate::algebra::univariate::UniPoly;

pub use diophantine::{solve_index_diophantine, IndexTriple};
pub use linear::Mat2;
pub use orbits::{orbit_indices, tangent_cubic, Direction, Index, IndexProfile, OrbitIndex, RadialOrbit};
pub use ratio::{briot_bouquet_check, dual_ratio, ratio_equation, weighted_ratio_equation, Chart, Failure, Univalence};
pub use table2::{match_table2, representative, BureauType, Classification, Label};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("every line through the origin is radial")]
    Dicritical,
    #[error("both quadratic forms vanish")]
    ZeroPair,
}

/// `y' = P(y,z)`, `z' = Q(y,z)`; coefficients of `y^2, yz, z^2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadPair {
    #[serde(serialize_with = "ser_rats")]
    pub p: [Rat; 3],
    #[serde(serialize_with = "ser_rats")]
    pub q: [Rat; 3],
}

fn ser_rats<S: serde::Serializer>(v: &[Rat; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&fmt_rat(x))?;
    }
    seq.end()
}

impl QuadPair {
    pub fn new(p: [Rat; 3], q: [Rat; 3]) -> Result<QuadPair, QuadError> {
        if p.iter().chain(q.iter()).all(|c| c.is_zero()) {
            return Err(QuadError::ZeroPair);
        }
        Ok(QuadPair { p, q })
    }

    pub fn from_ints(p: [i64; 3], q: [i64; 3]) -> QuadPair {
        QuadPair::new(p.map(rat), q.map(rat)).expect("nonzero pair")
    }

    /// `P(s, 1)` as a polynomial in `s`.
    pub fn p_affine(&self) -> UniPoly {
        UniPoly::new(vec![self.p[2].clone(), self.p[1].clone(), self.p[0].clone()])
    }

    /// `Q(s, 1)`.
    pub fn q_affine(&self) -> UniPoly {
        UniPoly::new(vec![self.q[2].clone(), self.q[1].clone(), self.q[0].clone()])
    }

    /// `P(1, σ)`.
    pub fn p_dual(&self) -> UniPoly {
        UniPoly::new(self.p.to_vec())
    }

    /// `Q(1, σ)`.
    pub fn q_dual(&self) -> UniPoly {
        UniPoly::new(self.q.to_vec())
    }

    pub fn to_surds(&self) -> [Surd; 6] {
        let c = |x: &Rat| Surd::rational(x.clone());
        [c(&self.p[0]), c(&self.p[1]), c(&self.p[2]), c(&self.q[0]), c(&self.q[1]), c(&self.q[2])]
    }
}

fn fmt_form(c: &[Rat; 3]) -> String {
    let mons = ["y^2", "y*z", "z^2"];
    let mut s = String::new();
    for (a, m) in c.iter().zip(mons) {
        if a.is_zero() {
            continue;
        }
        let neg = a < &Rat::zero();
        if !s.is_empty() || neg {
            s.push(if neg { '-' } else { '+' });
        }
        let abs = if neg { -a } else { a.clone() };
        if abs != rat(1) {
            s.push_str(&fmt_rat(&abs));
            s.push('*');
        }
        s.push_str(m);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for QuadPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y' = {}, z' = {}", fmt_form(&self.p), fmt_form(&self.q))
    }
}

impl fmt::Debug for QuadPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
