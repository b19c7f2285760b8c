//! Representatives of the univalent quadratic homogeneous fields and the
//! normalization of a pair onto one of them.

use std::fmt;

use itertools_free::permutations3;
use num_traits::Zero;
use serde::Serialize;

use super::linear::Mat2;
use super::orbits::{orbit_indices, Index, IndexProfile, RadialOrbit};
use super::ratio::{pair_univalence, Failure, Univalence};
use super::{IndexTriple, QuadPair};
use crate::algebra::rat::{rat, ratio, Rat};
use crate::algebra::surd::Surd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    XI,
    XII,
    XIII,
    XIV,
    NotUnivalent,
    Unknown,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BureauType {
    pub label: Label,
    /// Present exactly for `VIII` and `IX`.
    pub n: Option<i64>,
}

impl BureauType {
    pub fn plain(label: Label) -> BureauType {
        BureauType { label, n: None }
    }
}

impl fmt::Display for BureauType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{}({n})", self.label),
            None => write!(f, "{}", self.label),
        }
    }
}

/// The representative pair of a row. `n` selects the member of the
/// `III/IV/IX` and `II/VIII` rows (`n = -1, 1` and `n = 0` respectively).
pub fn representative(label: Label, n: Option<i64>) -> Option<QuadPair> {
    let h = ratio(1, 2);
    let pair = match label {
        Label::I => QuadPair::from_ints([-1, 0, 0], [0, -1, 0]),
        Label::V => QuadPair::from_ints([0, 0, 0], [6, 0, 0]),
        Label::III => QuadPair::from_ints([-1, 0, 0], [0, -2, 0]),
        Label::IV => QuadPair::from_ints([-1, 0, 0], [0, 0, 0]),
        Label::IX => {
            let n = n.filter(|n| !(-1..=1).contains(n))?;
            QuadPair::from_ints([-1, 0, 0], [0, n - 1, 0])
        }
        Label::VII => QuadPair::from_ints([0, 0, 0], [0, 1, 0]),
        Label::II => QuadPair::from_ints([1, -2, 0], [0, 0, -1]),
        Label::VIII => {
            let n = n.filter(|&n| n > 0)?;
            QuadPair::from_ints([1, -(n + 2), 0], [0, -n, -1])
        }
        Label::VI => QuadPair::from_ints([0, 0, 0], [0, 1, 1]),
        Label::XI => QuadPair::from_ints([1, -1, 0], [0, -1, 1]),
        Label::XII => QuadPair::from_ints([1, 2, 0], [0, -2, -1]),
        Label::XIII => QuadPair::new([-&h, rat(1), rat(0)], [rat(0), ratio(3, 2), rat(-1)]).ok()?,
        Label::XIV => QuadPair::from_ints([-1, 2, 0], [0, 1, -1]),
        Label::NotUnivalent | Label::Unknown => return None,
    };
    Some(pair)
}

/// One row of the representatives table.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub labels: &'static str,
    pub equation: &'static str,
    pub indices: &'static str,
}

pub fn table2_rows() -> Vec<Table2Row> {
    let row = |labels, equation, indices| Table2Row { labels, equation, indices };
    vec![
        row("I", "y' = -y^2, z' = -y*z", "---"),
        row("V", "y' = 0, z' = 6*y^2", "---"),
        row("III (n=-1), IV (n=1), IX (n not in {-1,0,1})", "y' = -y^2, z' = (n-1)*y*z", "n"),
        row("VII", "y' = 0, z' = y*z", "inf"),
        row("II (n=0), VIII (n>0)", "y' = y*(y-(n+2)*z), z' = -z*(n*y+z)", "1,n+1,-n-1"),
        row("VI", "y' = 0, z' = z*(y+z)", "1,inf,inf"),
        row("XI", "y' = y*(y-z), z' = z*(z-y)", "2,2,inf"),
        row("XII", "y' = y*(2*z+y), z' = -z*(2*y+z)", "3,3,3"),
        row("XIII", "y' = 1/2*y*(2*z-y), z' = 1/2*z*(3*y-2*z)", "2,4,4"),
        row("XIV", "y' = y*(2*z-y), z' = z*(y-z)", "2,3,6"),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub bureau: BureauType,
    pub profile: IndexProfile,
    /// `(Y, Z) = L (y, z)` carrying the pair onto the representative.
    pub map: Option<Mat2>,
    pub failure: Option<Failure>,
    pub warnings: Vec<String>,
}

fn surd(r: Rat) -> Surd {
    Surd::rational(r)
}

fn lift(q: &QuadPair) -> [Surd; 6] {
    q.to_surds()
}

fn verified(l: &Mat2, q: &QuadPair, bureau: BureauType) -> Option<(BureauType, Mat2)> {
    let rep = representative(bureau.label, rep_param(bureau))?;
    (l.transform(q)? == lift(&rep)).then(|| (bureau, l.clone()))
}

fn rep_param(b: BureauType) -> Option<i64> {
    b.n
}

fn dicritical(q: &QuadPair) -> Option<(BureauType, Mat2)> {
    // P = y l, Q = z l with l = p0 y + p1 z
    let (p0, p1) = (q.p[0].clone(), q.p[1].clone());
    if p0.is_zero() && p1.is_zero() {
        return None;
    }
    let second = if !p0.is_zero() { [surd(rat(0)), surd(rat(1))] } else { [surd(rat(1)), surd(rat(0))] };
    let l = Mat2::from_rows([surd(-p0), surd(-p1)], second);
    verified(&l, q, BureauType::plain(Label::I))
}

fn coords(o: &RadialOrbit) -> Option<[Surd; 2]> {
    o.direction.coords()
}

fn triple(q: &QuadPair, o: &RadialOrbit) -> Option<(BureauType, Mat2)> {
    let [y0, z0] = coords(o)?;
    let second = if !z0.is_zero() { [Surd::zero(), Surd::one()] } else { [Surd::one(), Surd::zero()] };
    let l = Mat2::from_rows([z0.clone(), -&y0], second);
    let t = l.transform(q)?;
    if !(t[0].is_zero() && t[1].is_zero() && t[2].is_zero() && t[4].is_zero() && t[5].is_zero()) {
        return None;
    }
    let c = t[3].clone();
    let s = Mat2::from_rows([Surd::one(), Surd::zero()], [Surd::zero(), &surd(rat(6)) / &c]);
    verified(&s.mul(&l), q, BureauType::plain(Label::V))
}

fn double_simple(q: &QuadPair, double: &RadialOrbit, simple: &RadialOrbit) -> Option<(BureauType, Mat2)> {
    let [y2, z2] = coords(double)?;
    let [y1, z1] = coords(simple)?;
    let l = Mat2::from_rows([z2, -&y2], [z1, -&y1]);
    let t = l.transform(q)?;
    // P = Y (p0 Y + p1 Z), Q = Z (q0 Y + p1 Z); the table requires p1 = 0
    if !t[1].is_zero() || !t[2].is_zero() || !t[3].is_zero() || !t[5].is_zero() {
        return None;
    }
    let (p0, q0) = (t[0].clone(), t[4].clone());
    let (s1, bureau) = if p0.is_zero() {
        (q0, BureauType::plain(Label::VII))
    } else {
        let n = (&Surd::one() - &(&q0 / &p0)).as_rational()?.clone();
        if !n.is_integer() {
            return None;
        }
        let n: i64 = n.to_integer().try_into().ok()?;
        let bureau = match n {
            -1 => BureauType::plain(Label::III),
            1 => BureauType::plain(Label::IV),
            n => BureauType { label: Label::IX, n: Some(n) },
        };
        (-&p0, bureau)
    };
    let s = Mat2::from_rows([s1, Surd::zero()], [Surd::zero(), Surd::one()]);
    verified(&s.mul(&l), q, bureau)
}

/// Row of a sorted triple of indices of three simple orbits.
fn distinct_label(sorted: &[Index]) -> Option<BureauType> {
    use Index::{Finite as F, Infinite as Inf};
    if IndexTriple::OneOppositePair.matches(sorted) {
        let Index::Finite(m) = sorted[2] else { return None };
        return Some(if m == 1 { BureauType::plain(Label::II) } else { BureauType { label: Label::VIII, n: Some(m - 1) } });
    }
    let label = match sorted {
        [F(1), Inf, Inf] => Label::VI,
        [F(2), F(2), Inf] => Label::XI,
        [F(3), F(3), F(3)] => Label::XII,
        [F(2), F(4), F(4)] => Label::XIII,
        [F(2), F(3), F(6)] => Label::XIV,
        _ => return None,
    };
    Some(BureauType::plain(label))
}

fn solve2(cols: [&[Surd; 2]; 2], rhs: &[Surd; 2]) -> Option<[Surd; 2]> {
    let m = Mat2::from_rows([cols[0][0].clone(), cols[1][0].clone()], [cols[0][1].clone(), cols[1][1].clone()]);
    Some(m.inverse()?.apply(rhs))
}

/// Projective map of the line sending `v_i` to multiples of `w_i`.
fn three_point_map(v: [&[Surd; 2]; 3], w: [&[Surd; 2]; 3]) -> Option<Mat2> {
    let alpha = solve2([v[0], v[1]], v[2])?;
    let beta = solve2([w[0], w[1]], w[2])?;
    if alpha.iter().chain(beta.iter()).any(|x| x.is_zero()) {
        return None;
    }
    let a = Mat2::from_rows([v[0][0].clone(), v[1][0].clone()], [v[0][1].clone(), v[1][1].clone()]);
    let b = Mat2::from_rows([w[0][0].clone(), w[1][0].clone()], [w[0][1].clone(), w[1][1].clone()]);
    let d = Mat2::from_rows([&beta[0] / &alpha[0], Surd::zero()], [Surd::zero(), &beta[1] / &alpha[1]]);
    Some(b.mul(&d).mul(&a.inverse()?))
}

fn distinct(q: &QuadPair, orbits: &[RadialOrbit], bureau: BureauType) -> Option<(BureauType, Mat2)> {
    let rep = representative(bureau.label, bureau.n)?;
    let rep_prof = orbit_indices(&rep);
    let rep_orbits = rep_prof.orbits();
    let v: Vec<[Surd; 2]> = orbits.iter().map(coords).collect::<Option<_>>()?;
    let w: Vec<[Surd; 2]> = rep_orbits.iter().map(coords).collect::<Option<_>>()?;
    let target = lift(&rep);
    for perm in permutations3() {
        if (0..3).any(|i| orbits[i].index != rep_orbits[perm[i]].index) {
            continue;
        }
        let Some(m) = three_point_map([&v[0], &v[1], &v[2]], [&w[perm[0]], &w[perm[1]], &w[perm[2]]]) else {
            continue;
        };
        let Some(t) = m.transform(q) else { continue };
        let Some(j) = (0..6).find(|&j| !target[j].is_zero()) else { continue };
        if t[j].is_zero() {
            continue;
        }
        let l = m.scale(&(&t[j] / &target[j]));
        if let Some(found) = verified(&l, q, bureau) {
            return Some(found);
        }
    }
    None
}

/// Label of the pair with a map onto its representative, or the residue
/// failure that rules univalence out.
pub fn match_table2(q: &QuadPair) -> Classification {
    let profile = orbit_indices(q);
    let mut warnings = Vec::new();
    let found = match &profile {
        IndexProfile::Dicritical => dicritical(q),
        IndexProfile::Orbits(orbits) => match profile.multiplicities().as_slice() {
            [3] => triple(q, &orbits[0]),
            [2, 1] => {
                let d = orbits.iter().find(|o| o.multiplicity == 2).expect("double orbit");
                let s = orbits.iter().find(|o| o.multiplicity == 1).expect("simple orbit");
                double_simple(q, d, s)
            }
            _ if profile.all_defined() => match distinct_label(&profile.summary()) {
                Some(b) if orbits.iter().any(|o| o.direction.coords().is_none()) => {
                    warnings.push("radial directions lie in a cubic field; normalizing map not computed".into());
                    return Classification { bureau: b, profile, map: None, failure: None, warnings };
                }
                Some(b) => distinct(q, orbits, b),
                None => None,
            },
            _ => None,
        },
    };
    if let Some((bureau, map)) = found {
        return Classification { bureau, profile, map: Some(map), failure: None, warnings };
    }
    match pair_univalence(q) {
        Ok(Univalence::Fails(f)) => Classification {
            bureau: BureauType::plain(Label::NotUnivalent),
            profile,
            map: None,
            failure: Some(f),
            warnings,
        },
        _ => {
            warnings.push("no normalization recipe settles this pair".into());
            Classification { bureau: BureauType::plain(Label::Unknown), profile, map: None, failure: None, warnings }
        }
    }
}

mod itertools_free {
    pub fn permutations3() -> [[usize; 3]; 6] {
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
    }
}
