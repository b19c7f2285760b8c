//! Built-in normal forms: the systems free of movable critical points and
//! the representatives of the quadratic parts.

use serde::Serialize;

use super::family::Family;
use super::{leading_jet, painleve_one_condition, PipelineError};
use crate::algebra::diff::{Rule, Rules};
use crate::algebra::expr::parse_poly;
use crate::algebra::MPoly;
use crate::charts::System;
use crate::quadclass::table2::{representative, table2_rows, Label};
use crate::quadclass::QuadPair;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub y: String,
    pub z: String,
    /// Side conditions `c = 0`, each with the jet it is solved for.
    pub side_conditions: Vec<(String, String)>,
    pub integration: &'static str,
}

fn entry(family: Family, y: &str, z: &str, side: &[(&str, &str)], integration: &'static str) -> CatalogEntry {
    CatalogEntry {
        family,
        y: y.to_string(),
        z: z.to_string(),
        side_conditions: side.iter().map(|(c, j)| (c.to_string(), j.to_string())).collect(),
        integration,
    }
}

const Q5: &str = "q''''-12*q*q''-12*q'^2";

/// The catalog entry of a family; `VIII(n)`, `IX.A0(n)` and `IX.B0(n)`
/// are instantiated at their `n`.
pub fn table1_entry(family: Family) -> CatalogEntry {
    use Family::*;
    match family {
        I => entry(I, "-y^2+a*z", "-y*z", &[], "elementary"),
        II => entry(II, "y*(y-2*z)+a", "-z^2", &[], "elementary"),
        III => entry(III, "y^2", "2*y*z+a*y", &[], "elementary"),
        IV => entry(IV, "-y^2+a*z", "0", &[], "elementary"),
        V0 => entry(V0, "0", "6*y^2", &[], "elementary"),
        V => entry(V, "z", "6*y^2+f", &[("f''", "f''")], "Painleve I"),
        VI => entry(VI, "a", "z*(z+y)+b", &[], "elementary"),
        VII0 => entry(VII0, "0", "y*z+a", &[], "elementary"),
        VII => entry(VII, "z", "y*z+a", &[], "elementary"),
        VIII(n) => {
            let mut e = entry(
                VIII(n),
                &format!("y*(y-{}*z)+a", n + 2),
                &format!("-z*({n}*y+z)+b"),
                &[],
                "elementary",
            );
            let jet = format!("b{}", "'".repeat(n as usize - 1));
            if let Ok(c) = super::conditions::viii_condition(n) {
                e.side_conditions.push((c.to_string(), jet));
            }
            e
        }
        IXA0(n) => entry(IXA0(n), "-y^2", &format!("-{}*y*z+a*y", n + 1), &[], "elementary"),
        IXA3 => entry(IXA3, "-y^2+z", "-4*y*z+a", &[], "elementary"),
        IXB0(n) => {
            let jet = format!("p{}", "'".repeat(n as usize - 1));
            CatalogEntry {
                family: IXB0(n),
                y: "-y^2".into(),
                z: format!("{}*y*z+p*y", n - 1),
                side_conditions: vec![(jet.clone(), jet)],
                integration: "elementary",
            }
        }
        IXB(2) => entry(IXB(2), "-y^2+z+12*q", "y*z", &[(Q5, "q''''")], "Painleve I"),
        IXB(3) => entry(IXB(3), "-y^2+z-1/2*f", "2*y*z+H", &[("f''", "f''"), ("H'", "H'")], "Painleve II"),
        IXB(5) => entry(IXB(5), "-y^2+z+3*q", "4*y*z-9*q'", &[(Q5, "q''''")], "Painleve I"),
        IXB(n) => panic!("no catalog row IX.B({n})"),
        XI => entry(XI, "y*(y-z)+a*y", "z*(z-y)-a*z", &[], "elementary"),
        XII => entry(
            XII,
            "y*(2*z+y)+2*f*y-H",
            "-z*(2*y+z)-2*f*z+K",
            &[("f''", "f''"), ("H'", "H'"), ("K'", "K'")],
            "Painleve IV",
        ),
        XIII => entry(
            XIII,
            "1/2*y*(2*z-y)+2*p*y",
            "1/2*z*(3*y-2*z)-4*p*z+2*p^2-2*p'+f",
            &[("f''", "f''"), ("p'''-6*p^2*p'-f'*p-f*p'", "p'''")],
            "Painleve II",
        ),
        XIV => {
            let mut e = entry(XIV, "y*(2*z-y)+3*p*y+r", "z*(y-z)-2*p*z", &[("r'-p*r", "r'")], "Painleve I");
            let q = super::frac("(p'+p^2-r)/12");
            e.side_conditions.push((painleve_one_condition(&q).to_string(), "p'''''".into()));
            e
        }
    }
}

impl CatalogEntry {
    pub fn system(&self) -> Result<System, PipelineError> {
        Ok(System::parse(&[("y", &self.y), ("z", &self.z)])?)
    }

    /// Side conditions as rewrite rules, each reduced by the previous ones.
    pub fn rules(&self) -> Result<Rules, PipelineError> {
        let mut rules = Rules::new();
        for (c, jet) in &self.side_conditions {
            let p: MPoly = parse_poly(c)?;
            let reduced = rules.reduce_poly(&p);
            let jet_var = leading_jet(reduced.numer()).filter(|v| v.to_string() == *jet).ok_or_else(|| {
                PipelineError::ShapeMismatch(format!("side condition {c} cannot be solved for {jet}"))
            })?;
            rules.push(Rule::solve(reduced.numer(), jet_var)?);
        }
        Ok(rules)
    }
}

pub fn table1() -> Vec<CatalogEntry> {
    Family::all_catalog().into_iter().map(table1_entry).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Entry {
    pub label: Label,
    pub n: Option<i64>,
    pub equation: &'static str,
    pub pair: QuadPair,
    pub indices: &'static str,
}

/// Representatives of the quadratic parts in row order, with the `IX` and
/// `VIII` rows instantiated at the given `n`.
pub fn table2(n_ix: i64, n_viii: i64) -> Vec<Table2Entry> {
    let labels = [
        (Label::I, None),
        (Label::V, None),
        (Label::IX, Some(n_ix)),
        (Label::VII, None),
        (Label::VIII, Some(n_viii)),
        (Label::VI, None),
        (Label::XI, None),
        (Label::XII, None),
        (Label::XIII, None),
        (Label::XIV, None),
    ];
    table2_rows()
        .into_iter()
        .zip(labels)
        .map(|(row, (label, n))| Table2Entry {
            label,
            n,
            equation: row.equation,
            pair: representative(label, n).expect("row has a representative"),
            indices: row.indices,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_with_rules() {
        for e in table1() {
            e.system().unwrap();
            e.rules().unwrap_or_else(|err| panic!("{}: {err}", e.family));
        }
    }

    #[test]
    fn twenty_rows() {
        assert_eq!(table1().len(), 20);
        assert_eq!(table2(2, 1).len(), 10);
    }

    #[test]
    fn sample_rows() {
        let v0 = table1_entry(Family::V0).system().unwrap();
        assert_eq!(v0, System::parse(&[("y", "0"), ("z", "6*y^2")]).unwrap());
        let xi = table1_entry(Family::XI).system().unwrap();
        assert_eq!(xi, System::parse(&[("y", "y*(y-z)+a*y"), ("z", "z*(z-y)-a*z")]).unwrap());
        let a3 = table1_entry(Family::IXA3).system().unwrap();
        assert_eq!(a3, System::parse(&[("y", "-y^2+z"), ("z", "-4*y*z+a")]).unwrap());
    }
}
