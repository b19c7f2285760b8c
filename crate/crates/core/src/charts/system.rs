//! Vector fields `v_i' = R_i(v, t)` with coefficients in the differential
//! field generated by the coefficient symbols.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::diff::{derive_except, substitute_frac_params, Rules};
use crate::algebra::expr::parse_expr;
use crate::algebra::{AlgebraError, Frac, MPoly, Var};

#[derive(Clone, PartialEq, Eq)]
pub struct System {
    pub vars: Vec<Var>,
    pub rhs: Vec<Frac>,
    /// Symbols with vanishing derivative (first-integral constants).
    pub constants: Vec<Var>,
}

impl System {
    pub fn new(vars: Vec<Var>, rhs: Vec<Frac>) -> System {
        assert_eq!(vars.len(), rhs.len(), "one right-hand side per variable");
        System { vars, rhs, constants: Vec::new() }
    }

    pub fn with_constants(mut self, constants: &[&str]) -> System {
        self.constants = constants.iter().map(|c| Var::new(c)).collect();
        self
    }

    /// Builds from textual right-hand sides, e.g. `("y", "z")`, `("z", "6*y^2+f")`.
    /// Jets are written with primes; division only by numbers.
    pub fn parse(pairs: &[(&str, &str)]) -> Result<System, AlgebraError> {
        let mut vars = Vec::new();
        let mut rhs = Vec::new();
        for (v, e) in pairs {
            vars.push(Var::new(v));
            let poly: MPoly = parse_expr(e)?.eval(1, &mut |n, k, _| Ok(MPoly::var(Var::jet(n, k))))?;
            rhs.push(Frac::from_poly(poly));
        }
        Ok(System::new(vars, rhs))
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, i: usize) -> Var {
        self.vars[i]
    }

    pub fn rhs_of(&self, v: Var) -> Option<&Frac> {
        self.vars.iter().position(|w| *w == v).map(|i| &self.rhs[i])
    }

    pub fn is_polynomial(&self) -> bool {
        self.rhs.iter().all(|r| r.denom().vars().iter().all(|v| !self.vars.contains(v)))
    }

    /// State variables plus frozen constants: held fixed by the coefficient
    /// derivation.
    pub(crate) fn frozen(&self) -> Vec<Var> {
        self.vars.iter().chain(self.constants.iter()).copied().collect()
    }

    /// Total derivative of `f(v, t)` along solutions.
    pub fn lie_derivative(&self, f: &Frac) -> Frac {
        let mut acc = derive_except(f, &self.frozen());
        for (v, r) in self.vars.iter().zip(&self.rhs) {
            if f.contains_var(*v) {
                acc = acc + f.partial(*v) * r.clone();
            }
        }
        acc
    }

    /// Substitutes values for coefficient symbols (images of jets follow by
    /// differentiation).
    pub fn substitute_params(&self, action: &BTreeMap<Var, Frac>) -> System {
        System {
            vars: self.vars.clone(),
            rhs: self.rhs.iter().map(|r| substitute_frac_params(r, action)).collect(),
            constants: self.constants.clone(),
        }
    }

    pub fn reduce(&self, rules: &Rules) -> System {
        System {
            vars: self.vars.clone(),
            rhs: self.rhs.iter().map(|r| rules.reduce(r)).collect(),
            constants: self.constants.clone(),
        }
    }

    /// Structural equality of right-hand sides after reduction by `rules`.
    pub fn equivalent_mod(&self, other: &System, rules: &Rules) -> bool {
        self.vars == other.vars && self.rhs.iter().zip(&other.rhs).all(|(a, b)| rules.reduce(&(a - b)).is_zero())
    }

    /// Coefficient symbols (all non-state variables), including `t`.
    pub fn symbols(&self) -> Vec<Var> {
        let mut s: Vec<Var> = self
            .rhs
            .iter()
            .flat_map(|r| r.vars())
            .filter(|v| !self.vars.contains(v))
            .collect();
        s.sort();
        s.dedup();
        s
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, r)) in self.vars.iter().zip(&self.rhs).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}' = {r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_poly;

    #[test]
    fn lie_derivative_of_first_integral_vanishes() {
        // y' = z, z' = 6 y^2 + f with f constant: 4 y^3 + 2 f y - z^2
        let s = System::parse(&[("y", "z"), ("z", "6*y^2+f")]).unwrap().with_constants(&["f"]);
        let h = Frac::from_poly(parse_poly("4*y^3+2*f*y-z^2").unwrap());
        assert!(s.lie_derivative(&h).is_zero());
    }

    #[test]
    fn lie_derivative_includes_coefficient_derivatives() {
        let s = System::parse(&[("y", "a*y")]).unwrap();
        let f = Frac::from_poly(parse_poly("b*y").unwrap());
        assert_eq!(s.lie_derivative(&f), Frac::from_poly(parse_poly("b'*y+a*b*y").unwrap()));
    }
}
