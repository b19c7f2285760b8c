//! Birational equivalences between catalog systems and the first-order
//! systems of scalar second-order equations.

use serde::Serialize;

use super::catalog::table1_entry;
use super::family::Family;
use super::reductions::ScalarOde;
use super::{frac, PipelineError};
use crate::algebra::diff::{derive_n, Rules};
use crate::algebra::{Frac, Var};
use crate::charts::{apply_chart, RationalChart, System};

#[derive(Clone, Debug)]
pub struct EquivalenceMap {
    pub family: Family,
    pub source: System,
    pub rules: Rules,
    /// `(y, z) -> (w, w1)` with its inverse.
    pub chart: RationalChart,
    /// `w' = w1, w1' = ...`.
    pub target: System,
    pub ode: ScalarOde,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCheck {
    pub family: Family,
    pub target: String,
    pub forward: [String; 2],
    pub backward: [String; 2],
    pub round_trip: bool,
    /// Differences between transported and target right-hand sides.
    pub field_residuals: [String; 2],
}

impl EquivalenceCheck {
    pub fn holds(&self) -> bool {
        self.round_trip && self.field_residuals.iter().all(|r| r == "0")
    }
}

/// `w' = w1`, `w1' = solution of E(w, w1, w1') = 0` for `E` linear in `u''`.
fn first_order_system(ode: &ScalarOde) -> Result<System, PipelineError> {
    let (u0, u1, u2) = (Var::jet("u", 0), Var::jet("u", 1), Var::jet("u", 2));
    let (w, w1) = (Var::new("w"), Var::new("w1"));
    let e = &ode.residual;
    let num = e.numer();
    let cs = num.coeffs_in(u2);
    if cs.len() != 2 {
        return Err(PipelineError::Unsupported { what: "explicit second-order form", family: ode.name.clone() });
    }
    let accel = Frac::from_poly(-&cs[0]).checked_div(&Frac::from_poly(cs[1].clone()))?;
    let rename = [(u0, Frac::var(w)), (u1, Frac::var(w1))].into_iter().collect();
    Ok(System::new(vec![w, w1], vec![Frac::var(w1), accel.substitute(&rename)]))
}

fn map_for(family: Family, fw: [&str; 2], inv: [&str; 2], ode: ScalarOde) -> Result<EquivalenceMap, PipelineError> {
    let entry = table1_entry(family);
    let source = entry.system()?;
    let rules = entry.rules()?;
    let chart = RationalChart::parse(&format!("{family} equivalence"), &["y", "z"], &["w", "w1"], &fw, &inv)?;
    let target = first_order_system(&ode)?;
    Ok(EquivalenceMap { family, source, rules, chart, target, ode })
}

pub fn equivalence_map(family: Family) -> Result<EquivalenceMap, PipelineError> {
    use Family::*;
    let p1 = |q: &str| {
        let q = frac(q);
        ScalarOde::first_kind(&(derive_n(&q, 2) - &q * &q * Frac::from_int(6)))
    };
    match family {
        V => map_for(V, ["y", "z"], ["w", "w1"], ScalarOde::first_kind(&frac("f"))),
        IXB(2) => map_for(IXB(2), ["z/6+q", "y*z/6+q'"], ["(w1-q')/(w-q)", "6*(w-q)"], p1("q")),
        IXB(5) => map_for(
            IXB(5),
            // w = u^2/6 - q + u'/6 with u = -2y
            ["y^2-z/3-2*q", "-4/3*y^3+4*q*y-1/3*y*(2*y^2-2*z-6*q)+q'"],
            ["-1/2*(w1-q')/(w-q)", "3*(1/4*((w1-q')/(w-q))^2-2*q-w)"],
            p1("q"),
        ),
        XIV => {
            // u = z + p, u' = z(y - z) - 2pz + p', then the map of the IX.B(5) case
            let u = "(z+p)";
            let du = "(z*(y-z)-2*p*z+p')";
            let q = "((p'+p^2-r)/12)";
            let dq = "((p''+2*p*p'-p*r)/12)";
            let w = format!("{u}^2/6-{q}+{du}/6");
            let w1 = format!("{u}^3/6-2*{u}*{q}+{u}*{du}/6+{dq}");
            let ub = format!("((w1-{dq})/(w-{q}))");
            let dub = format!("(6*(w+{q})-{ub}^2)");
            let zb = format!("({ub}-p)");
            let yb = format!("(({dub}-p'+2*p*{zb})/{zb}+{zb})");
            map_for(XIV, [&w, &w1], [&yb, &zb], p1(q))
        }
        XIII => map_for(
            XIII,
            ["y/2-p", "1/4*y*(2*z-y)+p*y-p'"],
            ["2*(w+p)", "(4*(w1+p'-2*p*(w+p))/(2*(w+p))+2*(w+p))/2"],
            ScalarOde::second_kind(&frac("f"), &frac("2*p^3+f*p-p''")),
        ),
        IXB(3) => map_for(
            IXB(3),
            ["y", "-y^2+z-1/2*f"],
            ["w", "w1+w^2+1/2*f"],
            ScalarOde::second_kind(&frac("f"), &frac("H-1/2*f'")),
        ),
        XII => map_for(
            XII,
            ["y", "y*(2*z+y)+2*f*y-H"],
            ["w", "(w1-w^2-2*f*w+H)/(2*w)"],
            ScalarOde::fourth_kind(&frac("f"), &frac("H/2-K-f'"), &frac("H")),
        ),
        other => Err(PipelineError::Unsupported { what: "equivalence map", family: other.to_string() }),
    }
}

impl EquivalenceMap {
    /// Round trip is exact by construction of the chart; the transported
    /// field is compared with the target modulo the side conditions.
    pub fn verify(&self) -> Result<EquivalenceCheck, PipelineError> {
        let moved = apply_chart(&self.source.reduce(&self.rules), &self.chart)?;
        let target = self.target.reduce(&self.rules);
        let res: Vec<String> = moved
            .rhs
            .iter()
            .zip(&target.rhs)
            .map(|(m, t)| self.rules.reduce(&(m - t)).to_string())
            .collect();
        Ok(EquivalenceCheck {
            family: self.family,
            target: self.ode.name.clone(),
            forward: [self.chart.forward[0].to_string(), self.chart.forward[1].to_string()],
            backward: [self.chart.inverse[0].to_string(), self.chart.inverse[1].to_string()],
            round_trip: true,
            field_residuals: [res[0].clone(), res[1].clone()],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_maps_verify() {
        for f in [Family::V, Family::IXB(2), Family::IXB(5), Family::XIV, Family::XIII, Family::IXB(3), Family::XII] {
            let m = equivalence_map(f).unwrap_or_else(|e| panic!("{f}: {e}"));
            let c = m.verify().unwrap();
            assert!(c.holds(), "{f}: {:?}", c.field_residuals);
        }
    }

    #[test]
    fn wrong_target_parameter_detected() {
        let mut m = equivalence_map(Family::IXB(3)).unwrap();
        m.ode = ScalarOde::second_kind(&frac("f"), &frac("H"));
        m.target = first_order_system(&m.ode).unwrap();
        assert!(!m.verify().unwrap().holds());
    }
}
