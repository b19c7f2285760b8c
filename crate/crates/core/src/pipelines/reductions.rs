//! Reductions of systems to scalar second-order equations, and the
//! closed-form solutions of the degenerate weighted family.

use std::collections::BTreeMap;

use serde::Serialize;

use super::catalog::table1_entry;
use super::family::Family;
use super::integrals::ser_frac;
use super::{frac, PipelineError};
use crate::algebra::diff::{derive, Rules};
use crate::algebra::rat::{rat, Rat};
use crate::algebra::{Frac, MPoly, Var};
use crate::charts::System;

/// `E(u, u', u'', ...) = 0` with coefficients in the parameters.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarOde {
    pub name: String,
    pub order: u32,
    #[serde(serialize_with = "ser_frac")]
    pub residual: Frac,
    /// Named parameters of the target equation with their values.
    pub params: Vec<(String, String)>,
}

impl ScalarOde {
    pub fn unknown() -> Var {
        Var::new("u")
    }

    fn parse(name: &str, order: u32, residual: &str, params: &[(&str, &Frac)]) -> ScalarOde {
        let map: BTreeMap<Var, Frac> = params.iter().map(|(k, v)| (Var::new(k), (*v).clone())).collect();
        ScalarOde {
            name: name.to_string(),
            order,
            residual: crate::algebra::diff::substitute_frac_params(&frac(residual), &map),
            params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    /// `u'' = 6u^2 + f`.
    pub fn first_kind(f: &Frac) -> ScalarOde {
        ScalarOde::parse("u'' = 6u^2 + f", 2, "u''-6*u^2-F", &[("F", f)])
    }

    /// `u'' = 2u^3 + f u + alpha`.
    pub fn second_kind(f: &Frac, alpha: &Frac) -> ScalarOde {
        ScalarOde::parse("u'' = 2u^3 + fu + alpha", 2, "u''-2*u^3-F*u-G", &[("F", f), ("G", alpha)])
    }

    /// `u'' = u'^2/(2u) + 3/2 u^3 + 4 f u^2 + 2 (f^2 - alpha) u - beta^2/(2u)`,
    /// multiplied by `2u`.
    pub fn fourth_kind(f: &Frac, alpha: &Frac, beta: &Frac) -> ScalarOde {
        ScalarOde::parse(
            "u'' = u'^2/(2u) + 3/2 u^3 + 4fu^2 + 2(f^2-alpha)u - beta^2/(2u)",
            2,
            "2*u*u''-u'^2-3*u^4-8*F*u^3-4*(F^2-G)*u^2+B^2",
            &[("F", f), ("G", alpha), ("B", beta)],
        )
    }

    /// `u'' = -u u' + u^3 - 12 q u + 12 q'`.
    pub fn riccati_type(q: &Frac) -> ScalarOde {
        ScalarOde::parse("u'' = -uu' + u^3 - 12qu + 12q'", 2, "u''+u*u'-u^3+12*Q*u-12*Q'", &[("Q", q)])
    }

    /// Substitutes the jets of `u`.
    pub fn evaluate(&self, jets: &[Frac]) -> Frac {
        let map: BTreeMap<Var, Frac> = jets.iter().enumerate().map(|(k, j)| (Var::jet("u", k as u32), j.clone())).collect();
        self.residual.substitute(&map)
    }
}

/// A scalar unknown `u = phi(y, z, t)` of a system and the equation it
/// satisfies modulo assumptions.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub family: Family,
    pub system: System,
    pub rules: Rules,
    pub phi: Frac,
    pub ode: ScalarOde,
}

impl Reduction {
    /// `phi, phi', ..., phi^(order)` along the system.
    pub fn jets(&self) -> Vec<Frac> {
        let s = self.system.reduce(&self.rules);
        let mut out = vec![self.rules.reduce(&self.phi)];
        for _ in 0..self.ode.order {
            let next = self.rules.reduce(&s.lie_derivative(out.last().expect("nonempty")));
            out.push(next);
        }
        out
    }

    pub fn residual(&self) -> Frac {
        self.rules.reduce(&self.ode.evaluate(&self.jets()))
    }
}

/// The scalar equation of a catalog family, with its side conditions.
pub fn second_order_reduction(family: Family) -> Result<Reduction, PipelineError> {
    use Family::*;
    let entry = table1_entry(family);
    let system = entry.system()?;
    let rules = entry.rules()?;
    let (phi, ode) = match family {
        V => (frac("y"), ScalarOde::first_kind(&frac("f"))),
        IXB(2) => (frac("z/6+q"), ScalarOde::first_kind(&frac("q''-6*q^2"))),
        IXB(3) => (frac("y"), ScalarOde::second_kind(&frac("f"), &frac("H-1/2*f'"))),
        IXB(5) => (frac("-2*y"), ScalarOde::riccati_type(&frac("q"))),
        IXA3 => (
            frac("y"),
            ScalarOde { name: "u'' + 6uu' + 4u^3 - a = 0".into(), order: 2, residual: frac("u''+6*u*u'+4*u^3-a"), params: vec![] },
        ),
        XIII => (frac("y/2-p"), ScalarOde::second_kind(&frac("f"), &frac("2*p^3+f*p-p''"))),
        XIV => (frac("z+p"), ScalarOde::riccati_type(&frac("(p'+p^2-r)/12"))),
        XII => (frac("y"), ScalarOde::fourth_kind(&frac("f"), &frac("H/2-K-f'"), &frac("H"))),
        other => return Err(PipelineError::Unsupported { what: "scalar reduction", family: other.to_string() }),
    };
    Ok(Reduction { family, system, rules, phi, ode })
}

/// Substituting `u = w'/(2w)` into `u'' + 6uu' + 4u^3 - a` gives
/// `(w''' - 2 a w) / (2w)`.
pub fn linearization_residual() -> Frac {
    let w = Frac::var(Var::new("w"));
    let u = derive(&w) * (w.scale(&rat(2))).inv().expect("w");
    let ode = ScalarOde { name: String::new(), order: 2, residual: frac("u''+6*u*u'+4*u^3-a"), params: vec![] };
    let jets = vec![u.clone(), derive(&u), derive(&derive(&u))];
    ode.evaluate(&jets)
}

/// `z(t) = (t - t0)^(n-1) * integral of C(s) (s - t0)^(-n) ds` for
/// polynomial `C` in `t`, with zero integration constant. Requires
/// `deg C <= n - 2`, so that no logarithm appears.
pub fn degenerate_solution(c: &MPoly, n: u32, t0: &Rat) -> Result<Frac, PipelineError> {
    let t = Var::new("t");
    if c.vars().iter().any(|v| *v != t) {
        return Err(PipelineError::ConditionsNotSatisfied("coefficient must be a polynomial in t".into()));
    }
    let deg = c.degree_in(t);
    if !c.is_zero() && deg + 2 > n {
        return Err(PipelineError::ConditionsNotSatisfied(format!("derivative of order {} of the coefficient does not vanish", n - 1)));
    }
    // expand C in powers of s = t - t0
    let shifted = Frac::from_poly(c.clone()).substitute_one(t, &(Frac::var(t) + Frac::constant(t0.clone())));
    let coeffs = shifted.numer().coeffs_in(t);
    let den = shifted.denom().constant_value().expect("polynomial");
    let mut z = Frac::zero();
    let s = Frac::var(t) - Frac::constant(t0.clone());
    for (k, ck) in coeffs.iter().enumerate() {
        let ck = ck.constant_value().expect("numeric coefficient") / &den;
        // (t - t0)^(n-1) * c_k (t - t0)^(k-n+1) / (k-n+1)
        let e = k as i64 - n as i64 + 1;
        z = z + s.pow(k as u32).scale(&(ck / rat(e)));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_poly;

    #[test]
    fn reductions_hold() {
        for f in [Family::V, Family::IXB(2), Family::IXB(3), Family::IXB(5), Family::IXA3, Family::XIII, Family::XIV, Family::XII] {
            let r = second_order_reduction(f).unwrap();
            assert!(r.residual().is_zero(), "{f}: {}", r.residual());
        }
    }

    #[test]
    fn wrong_parameter_detected() {
        let mut r = second_order_reduction(Family::XII).unwrap();
        r.ode = ScalarOde::fourth_kind(&frac("f"), &frac("H/2-K"), &frac("H"));
        assert!(!r.residual().is_zero());
    }

    #[test]
    fn third_order_linearization() {
        let r = linearization_residual();
        let target = frac("(w'''-2*a*w)/(2*w)");
        assert_eq!(r, target);
    }

    #[test]
    fn degenerate_closed_form() {
        let t = Var::new("t");
        for n in 2..=5u32 {
            for deg in 0..=n.saturating_sub(2) {
                let c = parse_poly(&format!("3*t^{deg}+1")).unwrap();
                let t0 = rat(2);
                let z = degenerate_solution(&c, n, &t0).unwrap();
                let y = (Frac::var(t) - Frac::constant(t0.clone())).inv().unwrap();
                // z' = (n-1) y z + C y
                let lhs = z.partial(t);
                let rhs = &(&y * &z).scale(&rat(n as i64 - 1)) + &(&y * &Frac::from_poly(c.clone()));
                assert_eq!(lhs, rhs, "n = {n}, deg = {deg}");
            }
        }
        assert!(degenerate_solution(&parse_poly("t").unwrap(), 2, &rat(0)).is_err());
    }
}
