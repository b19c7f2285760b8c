//! Canonical equations `y x' = X(x, y)`, `y' = Y(x, y)` with
//! `X = n a x + b y + ...`, `Y = a + ...`, and reduction of the index `n`
//! by the blow-up `x = (z - u) y`, `u = b / ((n - 1) a)`.

use std::collections::BTreeMap;

use super::statepoly::{binomial_shift, StatePoly};
use super::system::System;
use super::ChartError;
use crate::algebra::diff::{derive_except, Rules};
use crate::algebra::gcd::gcd;
use crate::algebra::rat::{rat, rat_to_i64};
use crate::algebra::{Frac, MPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalEquation {
    pub n: u32,
    pub x: Var,
    pub y: Var,
    /// `X`, the right-hand side of `y x'`.
    pub xr: StatePoly,
    /// `Y`, the right-hand side of `y'`.
    pub yr: StatePoly,
    /// Symbols with vanishing derivative.
    pub constants: Vec<Var>,
    /// `None` for exact polynomial data, otherwise the total degree up to
    /// which `X` and `Y` are known.
    pub exact_to: Option<u32>,
}

impl CanonicalEquation {
    pub fn a(&self) -> Frac {
        self.yr.coeff(0, 0)
    }

    pub fn b(&self) -> Frac {
        self.xr.coeff(0, 1)
    }

    pub fn f(&self, i: u32, j: u32) -> Frac {
        self.xr.coeff(i, j)
    }

    pub fn g(&self, i: u32, j: u32) -> Frac {
        self.yr.coeff(i, j)
    }

    fn frozen(&self) -> Vec<Var> {
        let mut v = vec![self.x, self.y];
        v.extend(self.constants.iter().copied());
        v
    }
}

fn positive_index(ce_x: &StatePoly, a: &Frac) -> Result<u32, ChartError> {
    let ratio = ce_x.coeff(1, 0).checked_div(a).map_err(|_| ChartError::ZeroA)?;
    let r = ratio.constant_value().ok_or_else(|| ChartError::NotCanonical(format!("index {ratio} is not a number")))?;
    rat_to_i64(&r)
        .filter(|k| *k > 0)
        .and_then(|k| u32::try_from(k).ok())
        .ok_or_else(|| ChartError::NotCanonical(format!("index {r} is not a positive integer")))
}

/// Reads off the canonical equation of a two-dimensional system at the
/// point `at`. The variable whose equation carries the pole plays `y`.
pub fn extract_canonical(sys: &System, at: &[Frac; 2]) -> Result<CanonicalEquation, ChartError> {
    if sys.dim() != 2 {
        return Err(ChartError::VariableMismatch);
    }
    let frozen = sys.frozen();
    // translate to the origin, accounting for a moving point
    let shift: BTreeMap<Var, Frac> =
        (0..2).map(|i| (sys.var(i), &Frac::var(sys.var(i)) + &at[i])).collect();
    let rhs: Vec<Frac> = (0..2)
        .map(|i| sys.rhs[i].substitute(&shift) - derive_except(&at[i], &frozen))
        .collect();
    let mut last = ChartError::NotCanonical("no assignment of x and y fits".into());
    for (yi, xi) in [(0usize, 1usize), (1, 0)] {
        let (x, y) = (sys.var(xi), sys.var(yi));
        match try_assignment(&rhs[xi], &rhs[yi], x, y, &sys.constants) {
            Ok(ce) => return Ok(ce),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn try_assignment(xdot: &Frac, ydot: &Frac, x: Var, y: Var, constants: &[Var]) -> Result<CanonicalEquation, ChartError> {
    let xfun = xdot * &Frac::var(y);
    let (y_probe, _) = StatePoly::expand(ydot, x, y, 1).ok_or(ChartError::NotHolomorphic)?;
    let (x_probe, _) = StatePoly::expand(&xfun, x, y, 1).ok_or(ChartError::NotHolomorphic)?;
    if !x_probe.coeff(0, 0).is_zero() {
        return Err(ChartError::NotCanonical("X does not vanish at the point".into()));
    }
    let a = y_probe.coeff(0, 0);
    if a.is_zero() {
        return Err(ChartError::ZeroA);
    }
    let n = positive_index(&x_probe, &a)?;
    let deg = n + 1;
    let (yr, ey) = StatePoly::expand(ydot, x, y, deg).ok_or(ChartError::NotHolomorphic)?;
    let (xr, ex) = StatePoly::expand(&xfun, x, y, deg).ok_or(ChartError::NotHolomorphic)?;
    Ok(CanonicalEquation {
        n,
        x,
        y,
        xr,
        yr,
        constants: constants.to_vec(),
        exact_to: if ex && ey { None } else { Some(deg) },
    })
}

/// `p((z - u) y, y)` with `z` taking the slot of `x`.
fn compose_blowup(p: &StatePoly, u: &Frac) -> StatePoly {
    let mut out = StatePoly::zero();
    for ((i, j), c) in p.terms() {
        for (k, bk) in binomial_shift(*i, u).into_iter().enumerate() {
            out.add_term(k as u32, i + j, c * &bk);
        }
    }
    out
}

/// One blow-up step lowering the index by one. Requires `n >= 2`.
pub fn reduce_index(ce: &CanonicalEquation) -> Result<CanonicalEquation, ChartError> {
    reduce_index_with(ce, &Rules::new())
}

pub fn reduce_index_with(ce: &CanonicalEquation, rules: &Rules) -> Result<CanonicalEquation, ChartError> {
    if ce.n < 2 {
        return Err(ChartError::IndexTooLow(ce.n));
    }
    let a = ce.a();
    let u = ce.b().checked_div(&a.scale(&rat((ce.n - 1) as i64))).map_err(|_| ChartError::ZeroA)?;
    let u = rules.reduce(&u);
    let du = rules.reduce(&derive_except(&u, &ce.frozen()));
    let xc = compose_blowup(&ce.xr, &u);
    let yc = compose_blowup(&ce.yr, &u);
    // (z - u) y Y
    let zmu = StatePoly::monomial(1, 1, Frac::one()).add(&StatePoly::monomial(0, 1, -&u));
    let num = xc.sub(&zmu.mul_trunc(&yc, None)).add(&StatePoly::monomial(0, 2, du));
    let xr = num.div_y().ok_or_else(|| ChartError::NotCanonical("blow-up numerator not divisible by y".into()))?;
    let exact_to = ce.exact_to.map(|d| d.saturating_sub(1));
    let (xr, yr) = match exact_to {
        Some(d) => (xr.truncate(d), yc.truncate(d)),
        None => (xr, yc),
    };
    let out = CanonicalEquation {
        n: ce.n - 1,
        x: ce.x,
        y: ce.y,
        xr: xr.reduce(rules),
        yr: yr.reduce(rules),
        constants: ce.constants.clone(),
        exact_to,
    };
    debug_assert!(out.xr.coeff(0, 0).is_zero());
    Ok(out)
}

/// Numerator of `b` after reducing to index 1, with factors shared with `a`
/// removed and content normalized. Vanishing is necessary for a
/// single-valued general solution through the point.
pub fn necessary_condition(ce: &CanonicalEquation) -> Result<MPoly, ChartError> {
    necessary_condition_with(ce, &Rules::new())
}

pub fn necessary_condition_with(ce: &CanonicalEquation, rules: &Rules) -> Result<MPoly, ChartError> {
    if let Some(d) = ce.exact_to {
        if d < ce.n {
            return Err(ChartError::IndexTooLow(ce.n));
        }
    }
    let mut cur = ce.clone();
    while cur.n > 1 {
        cur = reduce_index_with(&cur, rules)?;
    }
    let b = rules.reduce(&cur.b());
    Ok(strip_factors(b.numer(), cur.a().numer()))
}

fn strip_factors(p: &MPoly, by: &MPoly) -> MPoly {
    let mut p = p.clone();
    if p.is_zero() {
        return p;
    }
    loop {
        let g = gcd(&p, by);
        if g.is_constant() {
            break;
        }
        p = p.exact_div(&g).expect("gcd divides");
    }
    p.primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::diff::same_condition;
    use crate::charts::chart::parse_frac;

    fn chart_viii_prepared(n: i64) -> System {
        // u' = 1 + a u^2 + (n+2) u z, u z' = n z + b u - u z^2
        let u = format!("1 + a*u^2 + {}*u*z", n + 2);
        let z = format!("({n}*z + b*u - u*z^2)/u");
        System::new(vec![Var::new("u"), Var::new("z")], vec![parse_frac(&u).unwrap(), parse_frac(&z).unwrap()])
    }

    fn cond(n: i64) -> MPoly {
        let ce = extract_canonical(&chart_viii_prepared(n), &[Frac::zero(), Frac::zero()]).unwrap();
        assert_eq!(ce.n, n as u32);
        assert_eq!(ce.y, Var::new("u"));
        necessary_condition(&ce).unwrap()
    }

    fn p(s: &str) -> MPoly {
        parse_frac(s).unwrap().numer().clone()
    }

    #[test]
    fn low_index_conditions() {
        assert!(same_condition(&cond(1), &p("b")));
        assert!(same_condition(&cond(2), &p("b'")));
        assert!(same_condition(&cond(3), &p("b''+a*b-3*b^2")));
        assert!(same_condition(&cond(4), &p("b'''+4*(a-4*b)*b'+2*b*a'")));
    }

    #[test]
    fn index_five_condition_vanishes_at_zero() {
        let c = cond(5);
        assert!(c.contains_var(Var::jet("b", 4)));
        let zero: BTreeMap<Var, Frac> = c.vars().into_iter().filter(|v| v.name() == "b").map(|v| (v, Frac::zero())).collect();
        assert!(Frac::from_poly(c).substitute(&zero).is_zero());
    }

    #[test]
    fn exact_data_stays_exact() {
        let ce = extract_canonical(&chart_viii_prepared(3), &[Frac::zero(), Frac::zero()]).unwrap();
        assert_eq!(ce.exact_to, None);
        let r = reduce_index(&ce).unwrap();
        assert_eq!(r.n, 2);
        assert_eq!(r.a(), ce.a());
    }

    #[test]
    fn tail_beyond_needed_degree_is_irrelevant() {
        let s = System::new(
            vec![Var::new("u"), Var::new("z")],
            vec![parse_frac("1 + a*u^2 + 5*u*z + u^5/(1-u)").unwrap(), parse_frac("(3*z + b*u - u*z^2)/u").unwrap()],
        );
        let ce = extract_canonical(&s, &[Frac::zero(), Frac::zero()]).unwrap();
        assert_eq!(ce.exact_to, Some(4));
        assert!(same_condition(&necessary_condition(&ce).unwrap(), &cond(3)));
    }

    #[test]
    fn rejects_non_canonical() {
        let s = System::new(vec![Var::new("u"), Var::new("z")], vec![parse_frac("u").unwrap(), parse_frac("z").unwrap()]);
        assert!(extract_canonical(&s, &[Frac::zero(), Frac::zero()]).is_err());
        assert_eq!(reduce_index(&extract_canonical(&chart_viii_prepared(1), &[Frac::zero(), Frac::zero()]).unwrap()), Err(ChartError::IndexTooLow(1)));
    }
}
