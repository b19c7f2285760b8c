//! Rational changes of the state variables and affine gauges.

use std::collections::BTreeMap;
use std::fmt;

use super::system::System;
use super::ChartError;
use crate::algebra::expr::parse_expr;
use crate::algebra::{Frac, MPoly, Var};

/// `new = forward(old)`, `old = inverse(new)`; both may involve the
/// coefficient symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalChart {
    pub name: String,
    pub old: Vec<Var>,
    pub new: Vec<Var>,
    pub forward: Vec<Frac>,
    pub inverse: Vec<Frac>,
}

/// Parses a rational expression; unlike system specs, any division is
/// allowed here.
pub fn parse_frac(src: &str) -> Result<Frac, ChartError> {
    use crate::algebra::expr::Expr;
    fn go(e: &Expr) -> Result<Frac, ChartError> {
        Ok(match e {
            Expr::Num(r) => Frac::constant(r.clone()),
            Expr::Imag => return Err(ChartError::Parse("imaginary unit in chart".into())),
            Expr::Ident { name, order, .. } => Frac::from_poly(MPoly::var(Var::jet(name, *order))),
            Expr::Neg(a) => -go(a)?,
            Expr::Add(a, b) => go(a)? + go(b)?,
            Expr::Sub(a, b) => go(a)? - go(b)?,
            Expr::Mul(a, b) => go(a)? * go(b)?,
            Expr::Div(a, b, _) => go(a)?.checked_div(&go(b)?).map_err(|_| ChartError::Parse("division by zero".into()))?,
            Expr::Pow(a, k) => go(a)?.pow(*k),
        })
    }
    go(&parse_expr(src).map_err(|e| ChartError::Parse(e.to_string()))?)
}

fn substitute_all(fs: &[Frac], vars: &[Var], images: &[Frac]) -> Result<Vec<Frac>, ChartError> {
    let map: BTreeMap<Var, Frac> = vars.iter().copied().zip(images.iter().cloned()).collect();
    fs.iter()
        .map(|f| f.try_substitute(&map).map_err(|_| ChartError::NotInverse))
        .collect()
}

impl RationalChart {
    /// Checks `forward(inverse(new)) = new` and `inverse(forward(old)) = old`.
    pub fn new(
        name: &str,
        old: Vec<Var>,
        new: Vec<Var>,
        forward: Vec<Frac>,
        inverse: Vec<Frac>,
    ) -> Result<RationalChart, ChartError> {
        let n = old.len();
        if new.len() != n || forward.len() != n || inverse.len() != n {
            return Err(ChartError::NotInverse);
        }
        let fi = substitute_all(&forward, &old, &inverse)?;
        let ifw = substitute_all(&inverse, &new, &forward)?;
        let ok = fi.iter().zip(&new).all(|(f, v)| *f == Frac::var(*v))
            && ifw.iter().zip(&old).all(|(f, v)| *f == Frac::var(*v));
        if !ok {
            return Err(ChartError::NotInverse);
        }
        Ok(RationalChart { name: name.to_string(), old, new, forward, inverse })
    }

    /// `old = ["y", "z"]`, `new = ["u", "v"]`, forward `["1/y", "z/y"]`,
    /// inverse `["1/u", "v/u"]`.
    pub fn parse(
        name: &str,
        old: &[&str],
        new: &[&str],
        forward: &[&str],
        inverse: &[&str],
    ) -> Result<RationalChart, ChartError> {
        let fw = forward.iter().map(|s| parse_frac(s)).collect::<Result<Vec<_>, _>>()?;
        let inv = inverse.iter().map(|s| parse_frac(s)).collect::<Result<Vec<_>, _>>()?;
        RationalChart::new(
            name,
            old.iter().map(|s| Var::new(s)).collect(),
            new.iter().map(|s| Var::new(s)).collect(),
            fw,
            inv,
        )
    }

    pub fn inverted(&self) -> RationalChart {
        RationalChart {
            name: format!("inverse of {}", self.name),
            old: self.new.clone(),
            new: self.old.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn identity(vars: &[Var]) -> RationalChart {
        let id: Vec<Frac> = vars.iter().map(|v| Frac::var(*v)).collect();
        RationalChart { name: "identity".into(), old: vars.to_vec(), new: vars.to_vec(), forward: id.clone(), inverse: id }
    }

    /// Old variables as functions of the new ones.
    pub fn pull_back(&self, f: &Frac) -> Frac {
        let map: BTreeMap<Var, Frac> = self.old.iter().copied().zip(self.inverse.iter().cloned()).collect();
        f.substitute(&map)
    }

    /// New variables as functions of the old ones.
    pub fn push_forward(&self, f: &Frac) -> Frac {
        let map: BTreeMap<Var, Frac> = self.new.iter().copied().zip(self.forward.iter().cloned()).collect();
        f.substitute(&map)
    }
}

impl fmt::Display for RationalChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for RationalChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (v, e) in self.new.iter().zip(&self.forward) {
            write!(f, " {v} = {e};")?;
        }
        f.write_str(" ]")
    }
}

/// The field in the new variables: `new_i' = (D forward_i)(rhs)`, written in
/// the new variables. Equivalent to `(Dc)^{-1} (rhs o c)` for the inverse
/// map `c`.
pub fn apply_chart(s: &System, c: &RationalChart) -> Result<System, ChartError> {
    if c.old != s.vars {
        return Err(ChartError::VariableMismatch);
    }
    let jac = jacobian_det(c);
    if jac.is_zero() {
        return Err(ChartError::SingularChart);
    }
    let rhs = c
        .forward
        .iter()
        .map(|g| c.pull_back(&s.lie_derivative(g)))
        .collect();
    Ok(System { vars: c.new.clone(), rhs, constants: s.constants.clone() })
}

#[allow(clippy::needless_range_loop)]
fn jacobian_det(c: &RationalChart) -> Frac {
    let n = c.old.len();
    let mut m: Vec<Vec<Frac>> = c.forward.iter().map(|g| c.old.iter().map(|v| g.partial(*v)).collect()).collect();
    let mut det = Frac::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Frac::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let piv = m[col][col].clone();
        det = det * piv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let k = &m[r][col] / &piv;
            for cc in col..n {
                let t = &k * &m[col][cc];
                m[r][cc] = &m[r][cc] - &t;
            }
        }
    }
    det
}

/// Gauge transformations `y = λY + h`, `z = μZ + νY + k`, `dt/dτ = φ'`.
/// `T1` has `ν = 0`; `T2` has `μ = λ` and `ν = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGauge {
    pub lambda: Frac,
    pub mu: Frac,
    pub nu: Frac,
    pub h: Frac,
    pub k: Frac,
    /// `dt/dτ`; the transformed right-hand sides are multiplied by it.
    pub time_factor: Frac,
}

impl AffineGauge {
    pub fn identity() -> AffineGauge {
        AffineGauge {
            lambda: Frac::one(),
            mu: Frac::one(),
            nu: Frac::zero(),
            h: Frac::zero(),
            k: Frac::zero(),
            time_factor: Frac::one(),
        }
    }

    pub fn t1(lambda: Frac, h: Frac, mu: Frac, k: Frac) -> AffineGauge {
        AffineGauge { lambda, mu, nu: Frac::zero(), h, k, time_factor: Frac::one() }
    }

    pub fn t2(lambda: Frac, h: Frac, k: Frac) -> AffineGauge {
        AffineGauge { mu: lambda.clone(), lambda, nu: Frac::zero(), h, k, time_factor: Frac::one() }
    }

    pub fn t3(lambda: Frac, h: Frac, mu: Frac, nu: Frac, k: Frac) -> AffineGauge {
        AffineGauge { lambda, mu, nu, h, k, time_factor: Frac::one() }
    }

    pub fn with_time_factor(mut self, f: Frac) -> AffineGauge {
        self.time_factor = f;
        self
    }

    /// The underlying chart `(y, z) -> (Y, Z)`.
    pub fn chart(&self, old: [Var; 2], new: [Var; 2]) -> Result<RationalChart, ChartError> {
        if self.lambda.is_zero() || self.mu.is_zero() {
            return Err(ChartError::ZeroScale);
        }
        let (y, z) = (Frac::var(old[0]), Frac::var(old[1]));
        let (yy, zz) = (Frac::var(new[0]), Frac::var(new[1]));
        let inv_y = &(&self.lambda * &yy) + &self.h;
        let inv_z = &(&(&self.mu * &zz) + &(&self.nu * &yy)) + &self.k;
        let fw_y = &(&y - &self.h) / &self.lambda;
        let fw_z = &(&(&z - &(&self.nu * &fw_y)) - &self.k) / &self.mu;
        RationalChart::new("affine gauge", old.to_vec(), new.to_vec(), vec![fw_y, fw_z], vec![inv_y, inv_z])
    }
}

pub fn apply_gauge(s: &System, g: &AffineGauge, new: [Var; 2]) -> Result<System, ChartError> {
    if s.dim() != 2 {
        return Err(ChartError::VariableMismatch);
    }
    let c = g.chart([s.vars[0], s.vars[1]], new)?;
    let mut out = apply_chart(s, &c)?;
    for r in out.rhs.iter_mut() {
        *r = &*r * &g.time_factor;
    }
    Ok(out)
}
