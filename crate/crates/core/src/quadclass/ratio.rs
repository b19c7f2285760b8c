//! The ratio equation `-s''/(s')^2 = F(s)` and the residue test on it.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{QuadError, QuadPair};
use crate::algebra::rat::{rat, Rat};
use crate::algebra::surd::Surd;
use crate::algebra::univariate::{RatFun1, UniPoly};

/// Affine chart on the projective line of directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `s = y/z`
    S,
    /// `σ = z/y`
    Sigma,
}

/// `A` and `B` of the ratio equation in the chosen chart:
/// `A(s) = P(s,1) - s Q(s,1)`, `B(s) = Q(s,1)`, and dually with `P, Q`
/// swapped.
pub fn ratio_parts(q: &QuadPair, chart: Chart) -> (UniPoly, UniPoly) {
    let x = UniPoly::new(vec![Rat::zero(), Rat::one()]);
    let (num, den) = match chart {
        Chart::S => (q.p_affine(), q.q_affine()),
        Chart::Sigma => (q.q_dual(), q.p_dual()),
    };
    (num.sub(&x.mul(&den)), den)
}

/// `F = -(A' + B)/A`.
pub fn ratio_equation(q: &QuadPair, chart: Chart) -> Result<RatFun1, QuadError> {
    let (a, b) = ratio_parts(q, chart);
    if a.is_zero() {
        return Err(QuadError::Dicritical);
    }
    let num = a.derivative().add(&b).scale(&rat(-1));
    let var = match chart {
        Chart::S => "s",
        Chart::Sigma => "σ",
    };
    Ok(RatFun1::new(var, num, a))
}

fn shift(p: &UniPoly, k: usize) -> UniPoly {
    let mut c = vec![Rat::zero(); k];
    c.extend(p.coeffs().iter().cloned());
    UniPoly::new(c)
}

fn reversed(p: &UniPoly, deg: usize) -> UniPoly {
    UniPoly::new((0..=deg).map(|k| p.coeff(deg - k)).collect())
}

/// The equation satisfied by `w = 1/s`: `G(w) = -F(1/w)/w^2 - 2/w`.
pub fn dual_ratio(f: &RatFun1, var: &str) -> RatFun1 {
    let dn = f.numer().degree().unwrap_or(0);
    let dd = f.denom().degree().unwrap_or(0);
    let nt = reversed(f.numer(), dn);
    let dt = reversed(f.denom(), dd);
    // F(1/w) = w^e nt/dt
    let e = dd as i64 - dn as i64;
    let extra = (-e).max(0) as usize;
    let den = shift(&dt, 2 + extra);
    let t1 = shift(&nt, (e + extra as i64) as usize);
    let t2 = shift(&dt, 1 + extra).scale(&rat(2));
    let num = t1.add(&t2).scale(&rat(-1));
    RatFun1::new(var, num, den)
}

/// Ratio equation of `y' = -y^2 + z`, `z' = (n-1) y z` in `v = z/y^2`.
/// With `v' = y A(v)` and `y' = y^2 c(v)` one gets `F = -(c + A')/A`.
pub fn weighted_ratio_equation(n: i64) -> RatFun1 {
    let n = rat(n);
    // A(v) = (n+1) v - 2 v^2, c(v) = v - 1
    let a = UniPoly::new(vec![Rat::zero(), &n + rat(1), rat(-2)]);
    let c = UniPoly::new(vec![rat(-1), rat(1)]);
    RatFun1::new("v", a.derivative().add(&c).scale(&rat(-1)), a)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FailReason {
    NonSimplePole,
    NonIntegerIndex { residue: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub chart: String,
    pub location: String,
    pub reason: FailReason,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            FailReason::NonSimplePole => write!(f, "non-simple pole at {}={}", self.chart, self.location),
            FailReason::NonIntegerIndex { residue } => {
                write!(f, "residue {residue} at {}={} is neither -1 nor 1/k-1", self.chart, self.location)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Univalence {
    Univalent,
    Fails(Failure),
}

/// Index `k` with residue `1/k - 1`; `Some(None)` encodes residue -1.
pub fn index_of_residue(r: &Rat) -> Option<Option<Rat>> {
    let shifted = r + Rat::one();
    if shifted.is_zero() {
        return Some(None);
    }
    let k = shifted.recip();
    k.is_integer().then_some(Some(k))
}

fn residue_ok(r: &Surd) -> bool {
    r.as_rational().map(|x| index_of_residue(x).is_some()).unwrap_or(false)
}

fn check_chart(f: &RatFun1, only_origin: bool) -> Result<(), Failure> {
    let fail = |loc: String, reason| Failure { chart: f.var.clone(), location: loc, reason };
    let den = f.denom();
    if only_origin {
        let mult = den.coeffs().iter().take_while(|c| c.is_zero()).count();
        if mult > 1 {
            return Err(fail("0".into(), FailReason::NonSimplePole));
        }
        if mult == 1 {
            let r = f.residue_at(&Surd::zero());
            if !residue_ok(&r) {
                return Err(fail("0".into(), FailReason::NonIntegerIndex { residue: r.to_string() }));
            }
        }
        return Ok(());
    }
    let (roots, rest) = den.split();
    for (root, m) in &roots {
        if *m > 1 {
            return Err(fail(root.to_string(), FailReason::NonSimplePole));
        }
    }
    if let Some(rest) = &rest {
        if !rest.is_squarefree() {
            return Err(fail(format!("root of {}", rest.to_string_in(&f.var)), FailReason::NonSimplePole));
        }
    }
    for (root, _) in &roots {
        let r = f.residue_at(root);
        if !residue_ok(&r) {
            return Err(fail(root.to_string(), FailReason::NonIntegerIndex { residue: r.to_string() }));
        }
    }
    if let Some(rest) = rest {
        // residues at the conjugate roots of `rest` via a resultant
        let cof = den.divrem(&rest).0;
        let part = RatFun1::new(&f.var, f.numer().clone(), rest.mul(&cof));
        let rp = part.residue_polynomial();
        let (rr, leftover) = rp.rational_roots();
        let loc = format!("root of {}", rest.to_string_in(&f.var));
        if leftover.degree().unwrap_or(0) > 0 {
            return Err(fail(loc, FailReason::NonIntegerIndex { residue: "irrational".into() }));
        }
        for (r, _) in rr {
            if index_of_residue(&r).is_none() {
                return Err(fail(loc, FailReason::NonIntegerIndex { residue: crate::algebra::rat::fmt_rat(&r) }));
            }
        }
    }
    Ok(())
}

/// Simple poles with residues `-1` or `1/k - 1`, `k` an integer, in the
/// affine chart `f` and at the origin of the dual chart `dual`.
pub fn briot_bouquet_check(f: &RatFun1, dual: &RatFun1) -> Univalence {
    match check_chart(f, false).and_then(|_| check_chart(dual, true)) {
        Ok(()) => Univalence::Univalent,
        Err(e) => Univalence::Fails(e),
    }
}

/// Residue test for a quadratic pair.
pub fn pair_univalence(q: &QuadPair) -> Result<Univalence, QuadError> {
    let f = ratio_equation(q, Chart::S)?;
    let g = ratio_equation(q, Chart::Sigma)?;
    Ok(briot_bouquet_check(&f, &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn xiv_ratio_equation() {
        // (3s-2)/(s(3-2s))
        let q = QuadPair::from_ints([-1, 2, 0], [0, 1, -1]);
        let f = ratio_equation(&q, Chart::S).unwrap();
        let expected = RatFun1::new("s", up(&[-2, 3]), up(&[0, 3, -2]));
        assert_eq!(f, expected);
    }

    #[test]
    fn dual_chart_agrees_with_inversion_formula() {
        for (p, qq) in [([-1, 2, 0], [0, 1, -1]), ([1, 2, 0], [0, -2, -1]), ([1, -3, 0], [0, -1, -1])] {
            let q = QuadPair::from_ints(p, qq);
            let f = ratio_equation(&q, Chart::S).unwrap();
            let g = ratio_equation(&q, Chart::Sigma).unwrap();
            assert_eq!(dual_ratio(&f, "σ"), g);
        }
    }

    #[test]
    fn weighted_equation_closed_form() {
        for n in [2i64, 5] {
            let f = weighted_ratio_equation(n);
            // -(3v-n)/(v(2v-n-1))
            let expected = RatFun1::new("v", up(&[n, -3]), up(&[0, -n - 1, 2]));
            assert_eq!(f, expected);
        }
    }

    #[test]
    fn non_simple_pole_detected() {
        let f = RatFun1::new("s", up(&[1]), up(&[0, 0, 1]));
        let g = dual_ratio(&f, "σ");
        assert!(matches!(
            briot_bouquet_check(&f, &g),
            Univalence::Fails(Failure { reason: FailReason::NonSimplePole, .. })
        ));
    }

    #[test]
    fn xii_residues_are_minus_two_thirds() {
        let q = QuadPair::from_ints([1, 2, 0], [0, -2, -1]);
        let f = ratio_equation(&q, Chart::S).unwrap();
        for root in [Surd::zero(), Surd::rational(rat(-1))] {
            assert_eq!(f.residue_at(&root), Surd::rational(ratio(-2, 3)));
        }
        assert_eq!(pair_univalence(&q).unwrap(), Univalence::Univalent);
    }

    #[test]
    fn weighted_n4_fails() {
        let f = weighted_ratio_equation(4);
        let g = dual_ratio(&f, "w");
        match briot_bouquet_check(&f, &g) {
            Univalence::Fails(Failure { reason: FailReason::NonIntegerIndex { residue }, location, .. }) => {
                assert_eq!(residue, "-7/10");
                assert_eq!(location, "5/2");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irreducible_cubic_residues() {
        // F = A'/A style: residues at roots of s^3 - 2 are all 1 -> k = 1/2, fails
        let a = up(&[-2, 0, 0, 1]);
        let f = RatFun1::new("s", a.derivative(), a.clone());
        let g = dual_ratio(&f, "σ");
        assert!(matches!(briot_bouquet_check(&f, &g), Univalence::Fails(_)));
        // residues -1/2 -> k = 2
        let f = RatFun1::new("s", a.derivative().scale(&ratio(-1, 2)), a);
        let (rr, _) = f.residue_polynomial().rational_roots();
        assert_eq!(rr, vec![(ratio(-1, 2), 3)]);
    }
}
