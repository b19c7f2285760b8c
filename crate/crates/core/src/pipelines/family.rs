//! Family identifiers: the rows of the normal-form catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::PipelineError;
use crate::quadclass::table2::{BureauType, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    II,
    III,
    IV,
    V0,
    V,
    VI,
    VII0,
    VII,
    /// `n >= 1`.
    VIII(u32),
    /// `n > 1`; `z' = -(n+1) y z + a y`.
    IXA0(u32),
    /// The weighted family with `n = -3`.
    IXA3,
    /// `n > 1`; `z' = (n-1) y z + p y`.
    IXB0(u32),
    /// `n` in `{2, 3, 5}`.
    IXB(u32),
    XI,
    XII,
    XIII,
    XIV,
}

impl Family {
    pub fn all_catalog() -> Vec<Family> {
        use Family::*;
        vec![I, II, III, IV, V0, V, VI, VII0, VII, VIII(1), IXA0(2), IXA3, IXB0(2), IXB(2), IXB(3), IXB(5), XI, XII, XIII, XIV]
    }

    /// Label of the quadratic part.
    pub fn bureau(&self) -> BureauType {
        use Family::*;
        let plain = BureauType::plain;
        match self {
            I => plain(Label::I),
            II => plain(Label::II),
            III => plain(Label::III),
            IV => plain(Label::IV),
            V0 | V => plain(Label::V),
            VI => plain(Label::VI),
            VII0 | VII => plain(Label::VII),
            VIII(n) => BureauType { label: Label::VIII, n: Some(*n as i64) },
            IXA0(n) => BureauType { label: Label::IX, n: Some(-(*n as i64)) },
            IXA3 => BureauType { label: Label::IX, n: Some(-3) },
            IXB0(n) | IXB(n) => BureauType { label: Label::IX, n: Some(*n as i64) },
            XI => plain(Label::XI),
            XII => plain(Label::XII),
            XIII => plain(Label::XIII),
            XIV => plain(Label::XIV),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Family::*;
        match self {
            V0 => f.write_str("V0"),
            VII0 => f.write_str("VII0"),
            VIII(n) => write!(f, "VIII({n})"),
            IXA0(n) => write!(f, "IX.A0({n})"),
            IXA3 => f.write_str("IX.A(3)"),
            IXB0(n) => write!(f, "IX.B0({n})"),
            IXB(n) => write!(f, "IX.B({n})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn arg(s: &str, prefix: &str) -> Option<i64> {
    s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
}

impl FromStr for Family {
    type Err = PipelineError;

    /// Accepts the catalog names (`VIII(3)`, `IX.B(5)`, `IX.B0(2)`, ...) and
    /// the base-form aliases `IX(n)`, `III`, `IV`.
    fn from_str(s: &str) -> Result<Family, PipelineError> {
        use Family::*;
        let s = s.trim();
        let bad = || PipelineError::UnknownFamily(s.to_string());
        let pos = |n: i64, min: i64| if n >= min { Ok(n as u32) } else { Err(bad()) };
        let fam = match s {
            "I" => I,
            "II" => II,
            "III" => III,
            "IV" => IV,
            "V0" | "V_0" => V0,
            "V" => V,
            "VI" => VI,
            "VII0" | "VII_0" => VII0,
            "VII" => VII,
            "XI" => XI,
            "XII" => XII,
            "XIII" => XIII,
            "XIV" => XIV,
            "IX.A(3)" => IXA3,
            _ => {
                if let Some(n) = arg(s, "VIII") {
                    VIII(pos(n, 1)?)
                } else if let Some(n) = arg(s, "IX.A0") {
                    IXA0(pos(n, 2)?)
                } else if let Some(n) = arg(s, "IX.B0") {
                    IXB0(pos(n, 2)?)
                } else if let Some(n) = arg(s, "IX.B") {
                    match n {
                        2 | 3 | 5 => IXB(n as u32),
                        _ => return Err(bad()),
                    }
                } else if let Some(n) = arg(s, "IX") {
                    match n {
                        -3 => IXA3,
                        1 => IV,
                        -1 => III,
                        2 | 3 | 5 => IXB(n as u32),
                        _ => return Err(bad()),
                    }
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Family::all_catalog().into_iter().chain([Family::VIII(4), Family::IXB0(5), Family::IXA0(3)]) {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("IX(-3)".parse::<Family>().unwrap(), Family::IXA3);
        assert!("IX.B(4)".parse::<Family>().is_err());
        assert!("VIII(0)".parse::<Family>().is_err());
    }
}
