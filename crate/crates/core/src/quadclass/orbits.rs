//! Tangent cubic, radial orbits and their indices.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::ratio::{ratio_parts, Chart};
use super::QuadPair;
use crate::algebra::rat::{fmt_rat, rat, Rat};
use crate::algebra::surd::Surd;
use crate::algebra::univariate::{interpolate, resultant_formal, UniPoly};

/// `yQ - zP` as coefficients of `y^3, y^2 z, y z^2, z^3`.
pub fn tangent_cubic(q: &QuadPair) -> [Rat; 4] {
    [q.q[0].clone(), &q.q[1] - &q.p[0], &q.q[2] - &q.p[1], -&q.p[2]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Index::Finite(k) => s.serialize_i64(*k),
            Index::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitIndex {
    Defined(Index),
    /// Multiple root of the tangent cubic.
    NotSimple,
    /// `-A'/B` is not a nonzero integer.
    NonInteger(String),
}

/// Projective direction `(y0 : z0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Direction {
    Exact { y: Surd, z: Surd },
    /// One of the three roots (in `s = y/z`) of an irreducible cubic.
    CubicRoot { poly: UniPoly, which: usize },
}

impl Direction {
    pub fn affine(s: Surd) -> Direction {
        Direction::Exact { y: s, z: Surd::one() }
    }

    pub fn infinity() -> Direction {
        Direction::Exact { y: Surd::one(), z: Surd::zero() }
    }

    pub fn coords(&self) -> Option<[Surd; 2]> {
        match self {
            Direction::Exact { y, z } => Some([y.clone(), z.clone()]),
            Direction::CubicRoot { .. } => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Exact { y, z } => write!(f, "({y} : {z})"),
            Direction::CubicRoot { poly, which } => write!(f, "root #{which} of {}", poly.to_string_in("s")),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadialOrbit {
    pub direction: Direction,
    pub multiplicity: u32,
    pub index: OrbitIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndexProfile {
    Dicritical,
    Orbits(Vec<RadialOrbit>),
}

impl IndexProfile {
    pub fn orbits(&self) -> &[RadialOrbit] {
        match self {
            IndexProfile::Dicritical => &[],
            IndexProfile::Orbits(o) => o,
        }
    }

    /// Sorted multiset of the defined indices of simple orbits.
    pub fn summary(&self) -> Vec<Index> {
        let mut v: Vec<Index> = self
            .orbits()
            .iter()
            .filter_map(|o| match o.index {
                OrbitIndex::Defined(k) => Some(k),
                _ => None,
            })
            .collect();
        v.sort();
        v
    }

    /// Multiplicities of the radial directions, largest first.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.orbits().iter().map(|o| o.multiplicity).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    pub fn all_defined(&self) -> bool {
        self.orbits().iter().all(|o| matches!(o.index, OrbitIndex::Defined(_)))
    }

    /// The index column of the representatives table: `---` when no simple
    /// orbit carries an index.
    pub fn column(&self) -> String {
        let s = self.summary();
        if s.is_empty() {
            return "---".into();
        }
        s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn index_from_ratio(num: &Surd, den: &Surd) -> OrbitIndex {
    if den.is_zero() {
        return OrbitIndex::Defined(Index::Infinite);
    }
    let k = num / den;
    match k.as_rational() {
        Some(r) if r.is_integer() && !r.is_zero() => match r.to_integer().try_into() {
            Ok(k) => OrbitIndex::Defined(Index::Finite(k)),
            Err(_) => OrbitIndex::NonInteger(fmt_rat(r)),
        },
        _ => OrbitIndex::NonInteger(k.to_string()),
    }
}

/// Radial orbits with multiplicities and indices `k = -A'(s0)/B(s0)`
/// (infinite when `B(s0) = 0`); the direction `z = 0` is read in the dual
/// chart.
pub fn orbit_indices(q: &QuadPair) -> IndexProfile {
    let (a, b) = ratio_parts(q, Chart::S);
    if a.is_zero() {
        return IndexProfile::Dicritical;
    }
    let da = a.derivative();
    let deg = a.degree().unwrap_or(0);
    let mut orbits = Vec::new();
    let (roots, rest) = a.split();
    for (s0, m) in roots {
        let index = if m == 1 {
            index_from_ratio(&(-&da.eval_surd(&s0)), &b.eval_surd(&s0))
        } else {
            OrbitIndex::NotSimple
        };
        orbits.push(RadialOrbit { direction: Direction::affine(s0), multiplicity: m, index });
    }
    if let Some(rest) = rest {
        orbits.extend(cubic_orbits(&a, &b, &rest));
    }
    let at_infinity = 3 - deg as u32;
    if at_infinity > 0 {
        let index = if at_infinity == 1 {
            let (at, bt) = ratio_parts(q, Chart::Sigma);
            let num = Surd::rational(-at.coeff(1));
            index_from_ratio(&num, &Surd::rational(bt.coeff(0)))
        } else {
            OrbitIndex::NotSimple
        };
        orbits.push(RadialOrbit { direction: Direction::infinity(), multiplicity: at_infinity, index });
    }
    IndexProfile::Orbits(orbits)
}

/// Indices at the roots of an irreducible cubic `A`, read off the roots of
/// `R(k) = Res_s(A, k B + A')` without splitting the field.
fn cubic_orbits(a: &UniPoly, b: &UniPoly, rest: &UniPoly) -> Vec<RadialOrbit> {
    let da = a.derivative();
    let pts: Vec<(Rat, Rat)> = (0..=3)
        .map(|k| {
            let k = rat(k);
            (k.clone(), resultant_formal(a, &b.scale(&k).add(&da), 2))
        })
        .collect();
    let r = interpolate(&pts);
    let mut indices: Vec<OrbitIndex> = Vec::new();
    if r.degree().unwrap_or(0) == 0 {
        indices = vec![OrbitIndex::Defined(Index::Infinite); 3];
    } else {
        let (rr, left) = r.rational_roots();
        for (k, m) in rr {
            let idx = if k.is_integer() && !k.is_zero() {
                k.to_integer()
                    .try_into()
                    .map(|k| OrbitIndex::Defined(Index::Finite(k)))
                    .unwrap_or_else(|_| OrbitIndex::NonInteger(fmt_rat(&k)))
            } else {
                OrbitIndex::NonInteger(fmt_rat(&k))
            };
            indices.extend(std::iter::repeat_n(idx, m as usize));
        }
        while indices.len() < 3 {
            indices.push(OrbitIndex::NonInteger(format!("root of {}", left.to_string_in("k"))));
        }
    }
    indices
        .into_iter()
        .enumerate()
        .map(|(which, index)| RadialOrbit {
            direction: Direction::CubicRoot { poly: rest.monic(), which },
            multiplicity: 1,
            index,
        })
        .collect()
}

/// `sum 1/n_i` over defined indices (`1/inf = 0`).
pub fn reciprocal_sum(indices: &[Index]) -> Rat {
    indices
        .iter()
        .map(|k| match k {
            Index::Finite(n) => Rat::new((1).into(), (*n).into()),
            Index::Infinite => Rat::zero(),
        })
        .fold(Rat::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;
    use crate::quadclass::Mat2;
    use proptest::prelude::*;

    #[test]
    fn tangent_cubic_examples() {
        for n in 1..5i64 {
            let q = QuadPair::from_ints([1, -(n + 2), 0], [0, -n, -1]);
            // (n+1) y z (z - y) = (n+1)(y z^2 - y^2 z)
            assert_eq!(tangent_cubic(&q), [rat(0), rat(-(n + 1)), rat(n + 1), rat(0)]);
        }
        assert_eq!(tangent_cubic(&QuadPair::from_ints([-1, 0, 0], [0, -1, 0])), [rat(0), rat(0), rat(0), rat(0)]);
        assert_eq!(tangent_cubic(&QuadPair::from_ints([0, 0, 0], [6, 0, 0])), [rat(6), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn xiii_indices() {
        let q = QuadPair::new([ratio(-1, 2), rat(1), rat(0)], [rat(0), ratio(3, 2), rat(-1)]).unwrap();
        assert_eq!(orbit_indices(&q).summary(), vec![Index::Finite(2), Index::Finite(4), Index::Finite(4)]);
    }

    #[test]
    fn double_root_profile() {
        // IX(n): double direction y = 0, simple direction z = 0 with index n
        let q = QuadPair::from_ints([-1, 0, 0], [0, 3, 0]);
        let prof = orbit_indices(&q);
        assert_eq!(prof.multiplicities(), vec![2, 1]);
        assert_eq!(prof.summary(), vec![Index::Finite(4)]);
    }

    #[test]
    fn irreducible_cubic_indices() {
        // y' = 2 z^2, z' = y^2: A(s) = 2 - s^3, B(s) = s^2, so k = 3 at each root
        let q = QuadPair::from_ints([0, 0, 2], [1, 0, 0]);
        let prof = orbit_indices(&q);
        assert_eq!(prof.orbits().len(), 3);
        assert!(matches!(prof.orbits()[0].direction, Direction::CubicRoot { .. }));
        assert_eq!(prof.summary(), vec![Index::Finite(3); 3]);
    }

    fn small() -> impl Strategy<Value = i64> {
        -3i64..4
    }

    proptest! {
        #[test]
        fn indices_are_linear_invariants(
            p in prop::array::uniform3(small()), q in prop::array::uniform3(small()),
            m in prop::array::uniform4(small()),
        ) {
            prop_assume!(p.iter().chain(q.iter()).any(|&c| c != 0));
            let pair = QuadPair::from_ints(p, q);
            let s = |x: i64| Surd::rational(rat(x));
            let l = Mat2::from_rows([s(m[0]), s(m[1])], [s(m[2]), s(m[3])]);
            prop_assume!(!l.det().is_zero());
            let t = l.transform(&pair).unwrap();
            let r = |x: &Surd| x.as_rational().unwrap().clone();
            let image = QuadPair::new([r(&t[0]), r(&t[1]), r(&t[2])], [r(&t[3]), r(&t[4]), r(&t[5])]).unwrap();
            let before = orbit_indices(&pair);
            let after = orbit_indices(&image);
            prop_assert_eq!(before.summary(), after.summary());
            prop_assert_eq!(before.multiplicities(), after.multiplicities());
        }

        #[test]
        fn three_simple_orbits_satisfy_reciprocal_identity(
            which in 0usize..11, m in prop::array::uniform4(small()),
        ) {
            use crate::quadclass::table2::{representative, Label};
            let reps = [(Label::II, None), (Label::VI, None), (Label::XI, None), (Label::XII, None),
                (Label::XIII, None), (Label::XIV, None), (Label::VIII, Some(1)), (Label::VIII, Some(2)),
                (Label::VIII, Some(3)), (Label::VIII, Some(5)), (Label::VIII, Some(9))];
            let (l, n) = reps[which];
            let rep = representative(l, n).unwrap();
            let s = |x: i64| Surd::rational(rat(x));
            let lm = Mat2::from_rows([s(m[0]), s(m[1])], [s(m[2]), s(m[3])]);
            prop_assume!(!lm.det().is_zero());
            let t = lm.transform(&rep).unwrap();
            let r = |x: &Surd| x.as_rational().unwrap().clone();
            let image = QuadPair::new([r(&t[0]), r(&t[1]), r(&t[2])], [r(&t[3]), r(&t[4]), r(&t[5])]).unwrap();
            let prof = orbit_indices(&image);
            prop_assert_eq!(prof.orbits().len(), 3);
            prop_assert!(prof.all_defined());
            prop_assert_eq!(reciprocal_sum(&prof.summary()), rat(1));
        }
    }
}
