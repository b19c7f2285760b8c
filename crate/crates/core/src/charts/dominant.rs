//! Weighted-homogeneous dominant part of a polynomial vector field.

use super::system::System;
use super::ChartError;
use crate::algebra::{Frac, Monomial, Rat};
use crate::quadclass::QuadPair;

/// Top weighted component: every kept term of `rhs_k` has weighted degree
/// `degree + weights[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantPart {
    pub weights: [u32; 2],
    pub degree: i64,
    pub system: System,
}

impl DominantPart {
    /// The quadratic pair when weights are `(1, 1)` and the shifted degree
    /// is one, with numeric coefficients.
    pub fn to_quad_pair(&self) -> Option<QuadPair> {
        if self.weights != [1, 1] || self.degree != 1 {
            return None;
        }
        let (y, z) = (self.system.var(0), self.system.var(1));
        let coeffs = |f: &Frac| -> Option<[Rat; 3]> {
            let p = f.as_poly()?;
            let mut out: [Rat; 3] = Default::default();
            for (m, c) in p.terms() {
                let idx = match (m.exponent(y), m.exponent(z)) {
                    (2, 0) => 0,
                    (1, 1) => 1,
                    (0, 2) => 2,
                    _ => return None,
                };
                if m.factors().len() != (m.exponent(y) > 0) as usize + (m.exponent(z) > 0) as usize {
                    return None;
                }
                out[idx] = c.clone();
            }
            Some(out)
        };
        QuadPair::new(coeffs(&self.system.rhs[0])?, coeffs(&self.system.rhs[1])?).ok()
    }
}

fn weight(m: &Monomial, sys: &System, w: [u32; 2]) -> i64 {
    (0..2).map(|i| (m.exponent(sys.var(i)) * w[i]) as i64).sum()
}

/// Keeps, in each equation, the terms of maximal shifted weighted degree
/// `weight(term) - weights[k]`, taken over both equations.
pub fn dominant_part(sys: &System, weights: [u32; 2]) -> Result<DominantPart, ChartError> {
    if sys.dim() != 2 {
        return Err(ChartError::VariableMismatch);
    }
    let mut polys = Vec::new();
    for r in &sys.rhs {
        polys.push(r.as_poly().ok_or(ChartError::NotHolomorphic)?.clone());
    }
    let mut top: Option<i64> = None;
    for (k, p) in polys.iter().enumerate() {
        for (m, _) in p.terms() {
            let d = weight(m, sys, weights) - weights[k] as i64;
            top = Some(top.map_or(d, |t| t.max(d)));
        }
    }
    let d = top.ok_or(ChartError::DegenerateTop)?;
    if d <= 0 {
        return Err(ChartError::DegenerateTop);
    }
    let rhs = polys
        .iter()
        .enumerate()
        .map(|(k, p)| Frac::from_poly(p.filter_terms(|m| weight(m, sys, weights) - weights[k] as i64 == d)))
        .collect();
    let mut system = System::new(sys.vars.clone(), rhs);
    system.constants = sys.constants.clone();
    Ok(DominantPart { weights, degree: d, system })
}
