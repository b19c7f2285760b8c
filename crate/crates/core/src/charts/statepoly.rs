//! Polynomials in two state variables with coefficients in the
//! coefficient field, and truncated expansions of fractions at the origin.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::rat::rat;
use crate::algebra::{Frac, MPoly, Rules, Var};

/// `sum c_ij x^i y^j`, keyed by `(i, j)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct StatePoly {
    terms: BTreeMap<(u32, u32), Frac>,
}

impl StatePoly {
    pub fn zero() -> StatePoly {
        StatePoly::default()
    }

    pub fn constant(c: Frac) -> StatePoly {
        StatePoly::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: Frac) -> StatePoly {
        let mut p = StatePoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Frac) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Frac::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Frac {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Frac::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Frac)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn truncate(&self, deg: u32) -> StatePoly {
        StatePoly { terms: self.terms.iter().filter(|((i, j), _)| i + j <= deg).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn add(&self, o: &StatePoly) -> StatePoly {
        let mut out = self.clone();
        for ((i, j), c) in &o.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &StatePoly) -> StatePoly {
        self.add(&o.scale(&Frac::from_int(-1)))
    }

    pub fn scale(&self, c: &Frac) -> StatePoly {
        let mut out = StatePoly::zero();
        for ((i, j), d) in &self.terms {
            out.add_term(*i, *j, d * c);
        }
        out
    }

    /// Product keeping total degree `<= deg`.
    pub fn mul_trunc(&self, o: &StatePoly, deg: Option<u32>) -> StatePoly {
        let mut out = StatePoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                if deg.map(|d| i + j + k + l > d).unwrap_or(false) {
                    continue;
                }
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    /// Multiplies by `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> StatePoly {
        StatePoly { terms: self.terms.iter().map(|((i, j), c)| ((i + a, j + b), c.clone())).collect() }
    }

    /// Divides by `y`; `None` unless every term contains `y`.
    pub fn div_y(&self) -> Option<StatePoly> {
        if self.terms.keys().any(|(_, j)| *j == 0) {
            return None;
        }
        Some(StatePoly { terms: self.terms.iter().map(|((i, j), c)| ((*i, j - 1), c.clone())).collect() })
    }

    pub fn map_coeffs(&self, f: impl Fn(&Frac) -> Frac) -> StatePoly {
        let mut out = StatePoly::zero();
        for ((i, j), c) in &self.terms {
            out.add_term(*i, *j, f(c));
        }
        out
    }

    pub fn reduce(&self, rules: &Rules) -> StatePoly {
        if rules.is_empty() {
            return self.clone();
        }
        self.map_coeffs(|c| rules.reduce(c))
    }

    /// `p(x, y)` as a fraction in the given variables.
    pub fn to_frac(&self, x: Var, y: Var) -> Frac {
        let mut acc = Frac::zero();
        for ((i, j), c) in &self.terms {
            acc = acc + c * &Frac::from_poly(&MPoly::var(x).pow(*i) * &MPoly::var(y).pow(*j));
        }
        acc
    }

    /// Expansion of `f` at `x = y = 0`. Exact when the denominator is free of
    /// `x, y`; otherwise a Taylor polynomial of total degree `<= deg`.
    /// `None` when `f` is not holomorphic at the origin.
    pub fn expand(f: &Frac, x: Var, y: Var, deg: u32) -> Option<(StatePoly, bool)> {
        let num = split(f.numer(), x, y);
        let den = split(f.denom(), x, y);
        if den.terms.keys().all(|k| *k == (0, 0)) {
            let d0 = den.coeff(0, 0);
            return Some((num.scale(&d0.inv().ok()?), true));
        }
        let d0 = den.coeff(0, 0);
        let inv0 = d0.inv().ok()?;
        // 1/den = inv0 * sum_k (-(den - d0) inv0)^k
        let rest = den.sub(&StatePoly::constant(d0)).scale(&(-&inv0));
        let mut series = StatePoly::constant(Frac::one());
        let mut power = StatePoly::constant(Frac::one());
        for _ in 0..deg {
            power = power.mul_trunc(&rest, Some(deg));
            if power.is_zero() {
                break;
            }
            series = series.add(&power);
        }
        Some((num.mul_trunc(&series.scale(&inv0), Some(deg)), false))
    }

    pub fn display_in(&self, x: &str, y: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((i, j), c) in self.terms.iter() {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let p = |v: &str, e: u32| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        e => format!("{v}^{e}"),
                    };
                    [p(x, *i), p(y, *j)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*")
                }
            };
            parts.push(if mono.is_empty() { format!("({c})") } else { format!("({c})*{mono}") });
        }
        parts.join(" + ")
    }
}

/// Coefficients of `x^i y^j` in a polynomial.
pub fn split(p: &MPoly, x: Var, y: Var) -> StatePoly {
    let mut out = StatePoly::zero();
    for (m, c) in p.terms() {
        let (i, rest) = m.split_off(x);
        let (j, rest) = rest.split_off(y);
        out.add_term(i, j, Frac::from_poly(MPoly::term(c.clone(), rest)));
    }
    out
}

/// `(x - u)^i` expanded.
pub fn binomial_shift(i: u32, u: &Frac) -> Vec<Frac> {
    let mut coeffs = vec![Frac::zero(); i as usize + 1];
    let mut binom = rat(1);
    for k in 0..=i {
        // C(i, k) x^k (-u)^(i-k)
        coeffs[k as usize] = (-u).pow(i - k).scale(&binom);
        binom = binom * rat((i - k) as i64) / rat((k + 1) as i64);
    }
    coeffs
}

impl fmt::Debug for StatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x", "y"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::chart::parse_frac;

    #[test]
    fn exact_split() {
        let (p, exact) = StatePoly::expand(&parse_frac("(a*x+b*y^2+3)/c").unwrap(), Var::new("x"), Var::new("y"), 1).unwrap();
        assert!(exact);
        assert_eq!(p.coeff(0, 2), parse_frac("b/c").unwrap());
        assert_eq!(p.coeff(0, 0), parse_frac("3/c").unwrap());
    }

    #[test]
    fn geometric_series() {
        let (p, exact) = StatePoly::expand(&parse_frac("1/(1-x)").unwrap(), Var::new("x"), Var::new("y"), 4).unwrap();
        assert!(!exact);
        for k in 0..=4 {
            assert_eq!(p.coeff(k, 0), Frac::one());
        }
        assert_eq!(p.coeff(5, 0), Frac::zero());
    }

    #[test]
    fn pole_at_origin_rejected() {
        assert!(StatePoly::expand(&parse_frac("1/x").unwrap(), Var::new("x"), Var::new("y"), 2).is_none());
    }

    #[test]
    fn binomial_expansion() {
        let u = parse_frac("u").unwrap();
        let c = binomial_shift(3, &u);
        assert_eq!(c[0], parse_frac("-u^3").unwrap());
        assert_eq!(c[1], parse_frac("3*u^2").unwrap());
        assert_eq!(c[2], parse_frac("-3*u").unwrap());
        assert_eq!(c[3], Frac::one());
    }
}
