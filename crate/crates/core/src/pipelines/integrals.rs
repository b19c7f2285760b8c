//! First integrals checked by the Lie derivative modulo assumptions.

use serde::Serialize;

use super::{leading_jet, PipelineError};
use crate::algebra::diff::{Rule, Rules};
use crate::algebra::{Frac, MPoly};
use crate::charts::System;

#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegral {
    #[serde(serialize_with = "crate::pipelines::integrals::ser_frac")]
    pub h: Frac,
    /// Identities `c = 0`, each solved for its highest jet.
    #[serde(serialize_with = "crate::pipelines::integrals::ser_list")]
    pub assumptions: Vec<MPoly>,
}

pub(crate) fn ser_frac<S: serde::Serializer>(f: &Frac, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

pub(crate) fn ser_list<S: serde::Serializer>(v: &[MPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

/// Rules from identities, each reduced by the previous ones and solved for
/// its highest linear jet.
pub fn assumption_rules(assumptions: &[MPoly]) -> Result<Rules, PipelineError> {
    let mut rules = Rules::new();
    for c in assumptions {
        let r = rules.reduce_poly(c);
        if r.is_zero() {
            continue;
        }
        let jet = leading_jet(r.numer())
            .ok_or_else(|| PipelineError::ConditionsNotSatisfied(format!("assumption {c} has no solvable jet")))?;
        rules.push(Rule::solve(r.numer(), jet)?);
    }
    Ok(rules)
}

impl FirstIntegral {
    pub fn new(h: Frac, assumptions: Vec<MPoly>) -> FirstIntegral {
        FirstIntegral { h, assumptions }
    }

    /// `V(H) + dH/dt` reduced by the assumptions.
    pub fn residual(&self, s: &System) -> Result<Frac, PipelineError> {
        let rules = assumption_rules(&self.assumptions)?;
        Ok(rules.reduce(&s.reduce(&rules).lie_derivative(&self.h)))
    }
}

pub fn verify_first_integral(s: &System, h: &FirstIntegral) -> bool {
    h.residual(s).map(|r| r.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::parse_frac;

    fn fi(h: &str, assume: &[&str]) -> FirstIntegral {
        FirstIntegral::new(parse_frac(h).unwrap(), assume.iter().map(|a| parse_frac(a).unwrap().numer().clone()).collect())
    }

    #[test]
    fn cubic_integral_of_weighted_pair() {
        let s = System::parse(&[("y", "z"), ("z", "6*y^2+f")]).unwrap();
        assert!(verify_first_integral(&s, &fi("4*y^3+2*f*y-z^2", &["f'"])));
        assert!(!verify_first_integral(&s, &fi("4*y^3+2*f*y-z^2", &[])));
    }

    #[test]
    fn quartic_integrals() {
        let s = System::parse(&[("y", "-y^2+z+a"), ("z", "2*y*z+b")]).unwrap();
        assert!(verify_first_integral(&s, &fi("2*y^2*z-z^2+2*b*y-2*a*z-a^2", &["a'", "b'"])));
        let s = System::parse(&[("y", "y*(2*z+y)+2*f*y-a"), ("z", "-z*(2*y+z)-2*f*z+b")]).unwrap();
        assert!(verify_first_integral(&s, &fi("y^2*z+y*z^2+2*f*y*z-b*y-a*z-a*f", &["f'", "a'", "b'"])));
    }
}
