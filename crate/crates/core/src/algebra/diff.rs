//! The derivation on jet variables, parameter actions, and oriented
//! rewrite rules used to impose conditions such as `a' = p a`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

use super::frac::Frac;
use super::poly::{MPoly, Monomial};
use super::rat::Rat;
use super::var::Var;
use super::AlgebraError;

/// Differential polynomial in coefficient symbols.
pub type DiffPoly = MPoly;
/// Differential fraction in coefficient symbols.
pub type DiffFrac = Frac;

/// `d/dt` of a single variable: `t' = 1`, frozen variables are constant,
/// every other jet moves up one order.
fn var_derivative(v: Var, frozen: &[Var]) -> Option<MPoly> {
    if frozen.contains(&v) {
        None
    } else if v.is_time() {
        Some(MPoly::one())
    } else {
        Some(MPoly::var(v.prime()))
    }
}

/// Derivation of a differential polynomial, holding `frozen` constant.
pub fn derive_poly_except(p: &MPoly, frozen: &[Var]) -> MPoly {
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        for &(v, e) in m.factors() {
            let Some(dv) = var_derivative(v, frozen) else { continue };
            let (_, rest) = m.split_off(v);
            let rest = rest.mul(&Monomial::from_pairs(vec![(v, e - 1)]));
            let coeff = c * Rat::from_integer(BigInt::from(e));
            for (n, d) in dv.terms() {
                out.add_term(rest.mul(n), &coeff * d);
            }
        }
    }
    out
}

/// The derivation `'`: sends `(name, k)` to `(name, k+1)` and `t` to 1.
pub fn derive_poly(p: &MPoly) -> MPoly {
    derive_poly_except(p, &[])
}

pub fn derive_except(f: &Frac, frozen: &[Var]) -> Frac {
    let dn = derive_poly_except(f.numer(), frozen);
    if f.denom().is_one() {
        return Frac::from_poly(dn);
    }
    let dd = derive_poly_except(f.denom(), frozen);
    let num = &(&dn * f.denom()) - &(f.numer() * &dd);
    Frac::new(num, f.denom().pow(2)).expect("nonzero denominator")
}

pub fn derive(f: &Frac) -> Frac {
    derive_except(f, &[])
}

pub fn derive_n(f: &Frac, k: u32) -> Frac {
    let mut g = f.clone();
    for _ in 0..k {
        g = derive(&g);
    }
    g
}

/// Applies a parameter action given on order-0 symbols; images of higher
/// jets follow by repeated derivation, so the result commutes with `'`.
pub fn substitute_frac_params(f: &Frac, action: &BTreeMap<Var, Frac>) -> Frac {
    let mut map = BTreeMap::new();
    for v in f.vars() {
        if let Some(img) = action.get(&v.base()) {
            map.insert(v, derive_n(img, v.order()));
        }
    }
    f.substitute(&map)
}

/// Polynomial parameter action. Rejects images with a nonconstant
/// denominator.
pub fn substitute_params(p: &DiffPoly, action: &BTreeMap<Var, Frac>) -> Result<DiffPoly, AlgebraError> {
    for (v, img) in action {
        if !img.denom().is_constant() {
            return Err(AlgebraError::NonPolynomialAction(v.to_string()));
        }
    }
    let r = substitute_frac_params(&Frac::from_poly(p.clone()), action);
    Ok(r.numer().scale(&r.denom().constant_value().expect("constant denominator").recip()))
}

/// Content-normalized condition: coprime integer coefficients, positive
/// leading coefficient.
pub fn normalize_condition(p: &DiffPoly) -> DiffPoly {
    p.primitive()
}

/// Whether two conditions agree up to a nonzero rational factor.
pub fn same_condition(p: &DiffPoly, q: &DiffPoly) -> bool {
    normalize_condition(p) == normalize_condition(q)
}

/// Oriented rewrite `jet -> rhs`; it also rewrites every higher jet of the
/// same symbol by differentiating `rhs`.
#[derive(Clone, PartialEq, Eq)]
pub struct Rule {
    pub jet: Var,
    pub rhs: Frac,
}

impl Rule {
    pub fn new(jet: Var, rhs: Frac) -> Rule {
        Rule { jet, rhs }
    }

    /// `jet -> 0`.
    pub fn vanish(jet: Var) -> Rule {
        Rule { jet, rhs: Frac::zero() }
    }

    /// Solves `cond = 0` for `jet`, which must occur linearly.
    pub fn solve(cond: &DiffPoly, jet: Var) -> Result<Rule, AlgebraError> {
        let cs = cond.coeffs_in(jet);
        if cs.len() != 2 {
            return Err(AlgebraError::NotLinearIn(jet.to_string()));
        }
        let rhs = Frac::new(-&cs[0], cs[1].clone())?;
        Ok(Rule { jet, rhs })
    }

    fn applies_to(&self, v: Var) -> bool {
        v.name() == self.jet.name() && v.order() >= self.jet.order()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.jet, self.rhs)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered set of rewrite rules, applied until no jet is reducible.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Rules {
    rules: Vec<Rule>,
}

const MAX_PASSES: usize = 64;

impl Rules {
    pub fn new() -> Rules {
        Rules::default()
    }

    pub fn from_vec(rules: Vec<Rule>) -> Rules {
        Rules { rules }
    }

    pub fn push(&mut self, r: Rule) {
        self.rules.push(r);
    }

    pub fn extend(&mut self, other: &Rules) {
        self.rules.extend(other.rules.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    fn replacement(&self, v: Var) -> Option<Frac> {
        let r = self.rules.iter().find(|r| r.applies_to(v))?;
        Some(derive_n(&r.rhs, v.order() - r.jet.order()))
    }

    pub fn reduce(&self, f: &Frac) -> Frac {
        if self.rules.is_empty() {
            return f.clone();
        }
        let mut cur = f.clone();
        for _ in 0..MAX_PASSES {
            let map: BTreeMap<Var, Frac> = cur
                .vars()
                .into_iter()
                .filter_map(|v| self.replacement(v).map(|r| (v, r)))
                .collect();
            if map.is_empty() {
                return cur;
            }
            cur = cur.substitute(&map);
        }
        panic!("rewrite rules did not terminate on {f}");
    }

    pub fn reduce_poly(&self, p: &DiffPoly) -> Frac {
        self.reduce(&Frac::from_poly(p.clone()))
    }

    /// Whether `p` vanishes modulo the rules.
    pub fn annihilates(&self, p: &DiffPoly) -> bool {
        self.reduce_poly(p).is_zero()
    }

    pub fn symbols(&self) -> BTreeSet<Var> {
        self.rules.iter().map(|r| r.jet).collect()
    }
}

impl fmt::Debug for Rules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rules.iter()).finish()
    }
}

/// The coefficient of `jet` when `p` is linear in it.
pub fn linear_coefficient(p: &DiffPoly, jet: Var) -> Option<DiffPoly> {
    let cs = p.coeffs_in(jet);
    (cs.len() == 2).then(|| cs[1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_poly;
    use crate::algebra::rat::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    fn action(pairs: &[(&str, &str)]) -> BTreeMap<Var, Frac> {
        pairs.iter().map(|(k, v)| (Var::new(k), Frac::from_poly(p(v)))).collect()
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(derive_poly(&p("b")), p("b'"));
        assert_eq!(derive_poly(&p("a*b")), p("a'*b+a*b'"));
        assert_eq!(derive_poly(&p("b''+a*b-3*b^2")), p("b'''+a'*b+a*b'-6*b*b'"));
        assert_eq!(derive_poly(&p("t^2+3*t")), p("2*t+3"));
    }

    #[test]
    fn frozen_symbols_are_constant() {
        let h = Var::new("H");
        assert_eq!(derive_poly_except(&p("H*y"), &[h]), p("H*y'"));
    }

    #[test]
    fn action_on_derived_condition() {
        let act = action(&[("f", "-f"), ("a", "-a"), ("b", "2*f'-a+b")]);
        assert_eq!(substitute_params(&p("b'"), &act).unwrap(), p("2*f''-a'+b'"));
        let id = action(&[]);
        assert_eq!(substitute_params(&p("a*b'+3"), &id).unwrap(), p("a*b'+3"));
    }

    #[test]
    fn involution_negates_g() {
        let act = action(&[("p", "-p"), ("b", "b+4*p'")]);
        let g = p("-p''+2*p*p'+b*p");
        assert_eq!(substitute_params(&g, &act).unwrap(), -&g);
    }

    #[test]
    fn rational_action_rejected() {
        let mut act = BTreeMap::new();
        act.insert(Var::new("b"), Frac::new(MPoly::one(), p("a")).unwrap());
        assert!(matches!(substitute_params(&p("b"), &act), Err(AlgebraError::NonPolynomialAction(_))));
    }

    #[test]
    fn rules_rewrite_higher_jets() {
        // a' = p a, so a'' = p' a + p^2 a
        let rules = Rules::from_vec(vec![Rule::solve(&p("a'-p*a"), Var::jet("a", 1)).unwrap()]);
        let r = rules.reduce_poly(&p("a''"));
        assert_eq!(r, Frac::from_poly(p("p'*a+p^2*a")));
        assert!(rules.annihilates(&p("a''-p'*a-p*a'")));
        assert!(Rule::solve(&p("a'^2-1"), Var::jet("a", 1)).is_err());
    }

    #[test]
    fn condition_normalization() {
        assert!(same_condition(&p("-2*b''-2*a*b+6*b^2"), &p("b''+a*b-3*b^2")));
        assert_eq!(normalize_condition(&p("-4*b")), p("b"));
        assert_eq!(normalize_condition(&p("b/2+a/3")).num_terms(), 2);
        let _ = rat(0);
    }

    fn jet_var() -> impl Strategy<Value = Var> {
        (prop::sample::select(vec!["a", "b", "f", "t"]), 0u32..3)
            .prop_map(|(n, o)| if n == "t" { Var::time() } else { Var::jet(n, o) })
    }

    fn diff_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec((prop::collection::vec((jet_var(), 1u32..3), 0..3), -5i64..6), 0..4).prop_map(
            |terms| {
                let mut out = MPoly::zero();
                for (mono, c) in terms {
                    out.add_term(Monomial::from_pairs(mono), rat(c));
                }
                out
            },
        )
    }

    proptest! {
        #[test]
        fn derivation_is_additive_and_leibniz(x in diff_poly(), y in diff_poly()) {
            prop_assert_eq!(derive_poly(&(&x + &y)), &derive_poly(&x) + &derive_poly(&y));
            prop_assert_eq!(derive_poly(&(&x * &y)), &(&derive_poly(&x) * &y) + &(&x * &derive_poly(&y)));
        }

        #[test]
        fn action_commutes_with_derivation(x in diff_poly(), img_a in diff_poly(), img_b in diff_poly()) {
            let mut act = BTreeMap::new();
            act.insert(Var::new("a"), Frac::from_poly(img_a));
            act.insert(Var::new("b"), Frac::from_poly(img_b));
            let lhs = substitute_params(&derive_poly(&x), &act).unwrap();
            let rhs = derive_poly(&substitute_params(&x, &act).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
