//! Rational functions over the rationals in any set of jet variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{MPoly, Monomial};
use super::rat::Rat;
use super::var::Var;
use super::AlgebraError;

/// A normalized fraction `num / den`: coprime, with `den` monic under the
/// term order, and `0` represented as `0 / 1`. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: MPoly,
    den: MPoly,
}

impl Frac {
    pub fn new(num: MPoly, den: MPoly) -> Result<Frac, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Frac::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Frac {
        if num.is_zero() {
            return Frac::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides numerator"), den.exact_div(&g).expect("gcd divides denominator"))
            }
        };
        Frac::scaled(num, den)
    }

    /// Assumes `num` and `den` coprime; fixes the leading coefficient of `den`.
    fn scaled(num: MPoly, den: MPoly) -> Frac {
        let lc = den.leading_coeff();
        if lc.is_one() {
            Frac { num, den }
        } else {
            let inv = lc.recip();
            Frac { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Frac {
        Frac { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Frac {
        Frac { num: MPoly::one(), den: MPoly::one() }
    }

    pub fn constant(c: Rat) -> Frac {
        Frac { num: MPoly::constant(c), den: MPoly::one() }
    }

    pub fn from_int(n: i64) -> Frac {
        Frac::from_poly(MPoly::from_int(n))
    }

    pub fn var(v: Var) -> Frac {
        Frac::from_poly(MPoly::var(v))
    }

    pub fn sym(name: &str) -> Frac {
        Frac::var(Var::new(name))
    }

    pub fn from_poly(p: MPoly) -> Frac {
        Frac { num: p, den: MPoly::one() }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn scale(&self, c: &Rat) -> Frac {
        if c.is_zero() {
            return Frac::zero();
        }
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Frac, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Frac::scaled(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Frac) -> Result<Frac, AlgebraError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Frac {
        Frac::scaled(self.num.pow(e), self.den.pow(e))
    }

    pub fn powi(&self, e: i32) -> Result<Frac, AlgebraError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.inv().map(|f| f.pow((-e) as u32))
        }
    }

    /// Partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Frac {
        if !self.contains_var(v) {
            return Frac::zero();
        }
        let dn = self.num.partial(v);
        if self.den.is_one() {
            return Frac::from_poly(dn);
        }
        let dd = self.den.partial(v);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Frac::normalized(num, self.den.pow(2))
    }

    /// Substitutes variables by fractions simultaneously.
    pub fn substitute(&self, map: &BTreeMap<Var, Frac>) -> Frac {
        let n = subst_poly(&self.num, map);
        if self.den.is_one() {
            return n;
        }
        let d = subst_poly(&self.den, map);
        n.checked_div(&d).expect("substitution made a denominator vanish")
    }

    pub fn substitute_one(&self, v: Var, val: &Frac) -> Frac {
        let mut m = BTreeMap::new();
        m.insert(v, val.clone());
        self.substitute(&m)
    }

    /// Checked variant of [`Frac::substitute`].
    pub fn try_substitute(&self, map: &BTreeMap<Var, Frac>) -> Result<Frac, AlgebraError> {
        let n = subst_poly(&self.num, map);
        let d = subst_poly(&self.den, map);
        n.checked_div(&d)
    }
}

/// Evaluates a polynomial at fractions, over a single common denominator.
pub fn subst_poly(p: &MPoly, map: &BTreeMap<Var, Frac>) -> Frac {
    let active: Vec<(Var, &Frac, u32)> = map
        .iter()
        .filter_map(|(v, f)| {
            let d = p.degree_in(*v);
            (d > 0).then_some((*v, f, d))
        })
        .collect();
    if active.is_empty() {
        return Frac::from_poly(p.clone());
    }
    // powers[k][e] = num_k^e * den_k^(maxdeg_k - e)
    let mut weights: Vec<Vec<MPoly>> = Vec::with_capacity(active.len());
    let mut common_den = MPoly::one();
    for (_, f, d) in &active {
        let d = *d as usize;
        let mut np = vec![MPoly::one()];
        let mut dp = vec![MPoly::one()];
        for k in 1..=d {
            np.push(&np[k - 1] * f.numer());
            dp.push(&dp[k - 1] * f.denom());
        }
        let row: Vec<MPoly> = (0..=d).map(|e| &np[e] * &dp[d - e]).collect();
        common_den = &common_den * &dp[d];
        weights.push(row);
    }
    let mut num = MPoly::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut factor = MPoly::constant(c.clone());
        for &(v, e) in m.factors() {
            match active.iter().position(|(w, _, _)| *w == v) {
                Some(k) => factor = &factor * &weights[k][e as usize],
                None => rest.push((v, e)),
            }
        }
        // variables absent from the term still carry their den^maxdeg
        for (k, (v, _, _)) in active.iter().enumerate() {
            if m.exponent(*v) == 0 {
                factor = &factor * &weights[k][0];
            }
        }
        num = &num + &factor.mul_monomial(&Monomial::from_pairs(rest), &Rat::one());
    }
    Frac::normalized(num, common_den)
}

impl From<MPoly> for Frac {
    fn from(p: MPoly) -> Frac {
        Frac::from_poly(p)
    }
}

impl Add for &Frac {
    type Output = Frac;
    fn add(self, o: &Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac::normalized(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return Frac::scaled(&(&self.num * &o.den) + &o.num, o.den.clone());
        }
        if o.den.is_one() {
            return Frac::scaled(&self.num + &(&o.num * &self.den), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let sd = self.den.exact_div(&g).expect("gcd divides");
        let od = o.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &od) + &(&o.num * &sd);
        Frac::normalized(num, &sd * &o.den)
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &Frac {
    type Output = Frac;
    fn sub(self, o: &Frac) -> Frac {
        self + &(-o)
    }
}

impl Mul for &Frac {
    type Output = Frac;
    fn mul(self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Frac::from_poly(&self.num * &o.num);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = o.den.exact_div(&g1).expect("gcd divides");
        let n2 = o.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        Frac::scaled(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &Frac {
    type Output = Frac;
    /// Panics on division by zero; use [`Frac::checked_div`] otherwise.
    fn div(self, o: &Frac) -> Frac {
        self.checked_div(o).expect("division by zero fraction")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Frac {
            type Output = Frac;
            fn $f(self, o: Frac) -> Frac {
                (&self).$f(&o)
            }
        }
        impl $tr<&Frac> for Frac {
            type Output = Frac;
            fn $f(self, o: &Frac) -> Frac {
                (&self).$f(o)
            }
        }
        impl $tr<Frac> for &Frac {
            type Output = Frac;
            fn $f(self, o: Frac) -> Frac {
                self.$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        -&self
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn s(n: &str) -> Frac {
        Frac::sym(n)
    }

    #[test]
    fn cancels_common_scalar() {
        let f = Frac::new(MPoly::var(Var::new("b")).scale(&rat(2)), MPoly::var(Var::new("a")).scale(&rat(2))).unwrap();
        assert_eq!(f, s("b") / s("a"));
        assert_eq!(f.to_string(), "b/a");
    }

    #[test]
    fn zero_numerator_normalizes() {
        let b = MPoly::var(Var::new("b"));
        let f = Frac::new(&b.pow(2) - &(&b * &b), MPoly::var(Var::new("a"))).unwrap();
        assert!(f.is_zero());
        assert!(f.denom().is_one());
    }

    #[test]
    fn cancels_polynomial_gcd() {
        let a = MPoly::var(Var::new("a"));
        let b = MPoly::var(Var::new("b"));
        let f = Frac::new(&(&a * &b) + &a.pow(2), a.clone()).unwrap();
        assert_eq!(f, s("b") + s("a"));
        assert!(f.is_polynomial());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Frac::new(MPoly::one(), MPoly::zero()), Err(AlgebraError::ZeroDenominator));
    }

    #[test]
    fn substitution_common_denominator() {
        let x = Var::new("x");
        let p = &(&s("x") * &s("x")) + &s("c");
        let mut m = BTreeMap::new();
        m.insert(x, Frac::one() / s("u"));
        let r = p.substitute(&m);
        assert_eq!(r, Frac::one() / (s("u") * s("u")) + s("c"));
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = MPoly> {
        use proptest::prelude::*;
        prop::collection::vec((0u32..3, 0u32..2, -3i64..4), 1..4).prop_map(|ts| {
            let mut out = MPoly::zero();
            for (ea, eb, c) in ts {
                out.add_term(Monomial::from_pairs(vec![(Var::new("a"), ea), (Var::new("b"), eb)]), rat(c));
            }
            out
        })
    }

    fn small_frac() -> impl proptest::strategy::Strategy<Value = Frac> {
        use proptest::prelude::*;
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| Frac::new(n, d).ok())
    }

    proptest::proptest! {
        #[test]
        fn field_axioms(x in small_frac(), y in small_frac(), z in small_frac()) {
            proptest::prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            proptest::prop_assert_eq!(&x * &y, &y * &x);
            proptest::prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            proptest::prop_assert!((&x - &x).is_zero());
            if !x.is_zero() {
                proptest::prop_assert!((&x / &x).is_one());
            }
        }

        #[test]
        fn normalization_is_idempotent(x in small_frac()) {
            let again = Frac::new(x.numer().clone(), x.denom().clone()).unwrap();
            proptest::prop_assert_eq!(&again, &x);
        }
    }
}
