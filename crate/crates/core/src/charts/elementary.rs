//! Chains of elementary transformations `z -> z / u` resolving a point of
//! indeterminacy of the form `u' = -1 + ..., u z' = -n z + ...`.

use super::chart::{apply_chart, RationalChart};
use super::system::System;
use super::ChartError;
use crate::algebra::{Frac, Var};

/// The chart at infinity of `w' = w^2 + a - b`,
/// `z' = -(n+1) z^2 - n w z + b` given by `u = 1/w`.
pub fn chart_at_infinity(n: u32, b: &Frac) -> Result<System, ChartError> {
    let (w, z, u) = (Var::new("w"), Var::new("z"), Var::new("u"));
    let nn = Frac::from_int(n as i64);
    let a = Frac::sym("a");
    let wf = Frac::var(w);
    let zf = Frac::var(z);
    let base = System::new(
        vec![w, z],
        vec![
            &(&wf * &wf + a) - b,
            &(&(-&(&Frac::from_int(n as i64 + 1) * &(&zf * &zf))) - &(&nn * &(&wf * &zf))) + b,
        ],
    );
    let inv = RationalChart::new("infinity", vec![w, z], vec![u, z], vec![Frac::var(w).inv().expect("w"), zf.clone()], vec![
        Frac::var(u).inv().expect("u"),
        zf,
    ])?;
    apply_chart(&base, &inv)
}

/// Applies `n` elementary transformations `z = s u` to a system in
/// `(u, z)`; the composite is `z = s u^n`. Fails with `NotHolomorphic` if
/// the result is not polynomial.
pub fn elementary_chain_on(sys: &System, n: u32) -> Result<System, ChartError> {
    if sys.dim() != 2 {
        return Err(ChartError::VariableMismatch);
    }
    let (u, z) = (sys.var(0), sys.var(1));
    let s = Var::new("s");
    let composite = RationalChart::new(
        "elementary chain",
        vec![u, z],
        vec![u, s],
        vec![Frac::var(u), Frac::var(z) * Frac::var(u).pow(n).inv().map_err(|_| ChartError::SingularChart)?],
        vec![Frac::var(u), Frac::var(s) * Frac::var(u).pow(n)],
    )?;
    let out = apply_chart(sys, &composite)?;
    if !out.is_polynomial() {
        return Err(ChartError::NotHolomorphic);
    }
    Ok(out)
}

/// `n` elementary transformations at the point `u = z = 0` of the chart at
/// infinity; requires `b = 0`. The result is
/// `u' = -1 - a u^2`, `s' = n a s u - (n+1) u^n s^2`.
pub fn elementary_chain(n: u32, b: &Frac) -> Result<System, ChartError> {
    if !b.is_zero() {
        return Err(ChartError::NonZeroB);
    }
    elementary_chain_on(&chart_at_infinity(n, b)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::chart::parse_frac;

    #[test]
    fn chart_at_infinity_form() {
        let s = chart_at_infinity(3, &Frac::sym("b")).unwrap();
        assert_eq!(s.rhs[0], parse_frac("-1 + (b - a)*u^2").unwrap());
        assert_eq!(s.rhs[1], parse_frac("(-3*z + b*u - 4*u*z^2)/u").unwrap());
    }

    #[test]
    fn chain_is_polynomial() {
        for n in 1..=8u32 {
            let s = elementary_chain(n, &Frac::zero()).unwrap();
            assert_eq!(s.rhs[0], parse_frac("-1 - a*u^2").unwrap(), "n = {n}");
            let expect = format!("{n}*a*s*u - {}*u^{n}*s^2", n + 1);
            assert_eq!(s.rhs[1], parse_frac(&expect).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn nonzero_b_rejected() {
        assert_eq!(elementary_chain(2, &Frac::sym("b")), Err(ChartError::NonZeroB));
        let s = chart_at_infinity(2, &Frac::sym("b")).unwrap();
        assert_eq!(elementary_chain_on(&s, 2), Err(ChartError::NotHolomorphic));
    }
}
