//! Dense univariate polynomials over Q, root isolation over Q and its
//! quadratic extensions, resultants, and univariate rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{fmt_rat, Rat};
use super::surd::{squarefree_decompose, Surd};

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Rat>) -> UniPoly {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> UniPoly {
        UniPoly { c: Vec::new() }
    }

    pub fn constant(a: Rat) -> UniPoly {
        UniPoly::new(vec![a])
    }

    /// The polynomial `x - r`.
    pub fn linear_root(r: &Rat) -> UniPoly {
        UniPoly::new(vec![-r, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().recip();
        self.scale(&l)
    }

    pub fn scale(&self, a: &Rat) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.c.iter().enumerate().skip(1).map(|(k, a)| a * Rat::from_integer(BigInt::from(k))).collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_surd(&self, x: &Surd) -> Surd {
        self.c
            .iter()
            .rev()
            .fold(Surd::zero(), |acc, a| &(&acc * x) + &Surd::rational(a.clone()))
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let ld = d.leading();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &ld;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dj;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Integer multiple with coprime integer coefficients.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for a in &self.c {
            den = den.lcm(a.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            ints
        } else {
            ints.into_iter().map(|x| x / &g).collect()
        }
    }

    /// Rational roots with multiplicities, plus the cofactor free of them.
    pub fn rational_roots(&self) -> (Vec<(Rat, u32)>, UniPoly) {
        let mut p = self.monic();
        let mut roots: Vec<(Rat, u32)> = Vec::new();
        if p.degree().unwrap_or(0) == 0 {
            return (roots, p);
        }
        let mut zero_mult = 0;
        while p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
            p = UniPoly::new(p.c[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Rat::zero(), zero_mult));
        }
        loop {
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
            let ints = p.integer_coeffs();
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let mut found = None;
            'search: for q in divisors(&an) {
                for pp in divisors(&a0) {
                    for s in [1i32, -1] {
                        let cand = Rat::new(&pp * BigInt::from(s), q.clone());
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            let Some(r) = found else { break };
            let mut m = 0;
            let lin = UniPoly::linear_root(&r);
            loop {
                let (q, rem) = p.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                p = q;
                m += 1;
            }
            roots.push((r, m));
        }
        (roots, p)
    }

    /// Roots over Q or a quadratic extension. Returns the roots found and
    /// any leftover factor (degree >= 3, irreducible over Q).
    pub fn split(&self) -> (Vec<(Surd, u32)>, Option<UniPoly>) {
        let (rr, rest) = self.rational_roots();
        let mut out: Vec<(Surd, u32)> = rr.into_iter().map(|(r, m)| (Surd::rational(r), m)).collect();
        match rest.degree() {
            None | Some(0) => (out, None),
            Some(2) => {
                let (r1, r2) = quadratic_roots(&rest);
                out.push((r1, 1));
                out.push((r2, 1));
                (out, None)
            }
            Some(_) => (out, Some(rest)),
        }
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            let aa = a.abs();
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rat(&aa));
            } else if aa.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{mono}", fmt_rat(&aa)));
            }
        }
        s
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let Some(m) = n.to_u64() else {
        return vec![BigInt::one(), n.clone()];
    };
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k.saturating_mul(k) <= m {
        if m % k == 0 {
            small.push(BigInt::from(k));
            if k != m / k {
                large.push(BigInt::from(m / k));
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Both roots of a quadratic with no rational root.
pub fn quadratic_roots(p: &UniPoly) -> (Surd, Surd) {
    let a = p.coeff(2);
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &b * &b - Rat::from_integer(BigInt::from(4)) * &a * &c;
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = disc.numer() * disc.denom();
    let (s, r) = squarefree_decompose(&nd);
    let two_a = &a * Rat::from_integer(BigInt::from(2));
    let re = -&b / &two_a;
    let im = Rat::new(s, disc.denom().clone()) / &two_a;
    (Surd::new(re.clone(), im.clone(), r.clone()), Surd::new(re, -im, r))
}

/// Determinant over Q by fraction-exact Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Sylvester resultant.
pub fn resultant(a: &UniPoly, b: &UniPoly) -> Rat {
    match b.degree() {
        Some(n) => resultant_formal(a, b, n),
        None => Rat::zero(),
    }
}

/// Sylvester resultant with `b` read as a polynomial of formal degree `n`
/// (leading coefficients may vanish). Keeps families `b(k)` polynomial in `k`.
pub fn resultant_formal(a: &UniPoly, b: &UniPoly, n: usize) -> Rat {
    let Some(m) = a.degree() else {
        return Rat::zero();
    };
    if b.is_zero() {
        return Rat::zero();
    }
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for k in 0..=m {
            row[i + k] = a.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for k in 0..=n {
            row[i + k] = b.coeff(n - k);
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Lagrange interpolation through `(x_i, y_i)`.
pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = UniPoly::constant(Rat::one());
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::linear_root(xj));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&(yi / denom)));
    }
    acc
}

/// A univariate rational function `num/den` over Q, in lowest terms with
/// monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun1 {
    pub var: String,
    num: UniPoly,
    den: UniPoly,
}

impl RatFun1 {
    pub fn new(var: &str, num: UniPoly, den: UniPoly) -> RatFun1 {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.divrem(&g).0, den.divrem(&g).0)
        } else {
            (num, den)
        };
        let l = den.leading().recip();
        RatFun1 { var: var.to_string(), num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Residue at a simple pole.
    pub fn residue_at(&self, pole: &Surd) -> Surd {
        &self.num.eval_surd(pole) / &self.den.derivative().eval_surd(pole)
    }

    /// Polynomial whose roots are the residues at the (simple) poles:
    /// `Res_x(den, num - r den')` as a polynomial in `r`.
    pub fn residue_polynomial(&self) -> UniPoly {
        let deg = self.den.degree().unwrap_or(0);
        let dd = self.den.derivative();
        let formal = self.num.degree().unwrap_or(0).max(deg.saturating_sub(1));
        let pts: Vec<(Rat, Rat)> = (0..=deg as i64)
            .map(|k| {
                let r = Rat::from_integer(BigInt::from(k));
                let g = self.num.sub(&dd.scale(&r));
                (r, resultant_formal(&self.den, &g, formal))
            })
            .collect();
        interpolate(&pts)
    }
}

impl fmt::Display for RatFun1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_string_in(&self.var);
        if self.den.degree() == Some(0) && self.den.leading().is_one() {
            return f.write_str(&n);
        }
        write!(f, "({n})/({})", self.den.to_string_in(&self.var))
    }
}

impl fmt::Debug for RatFun1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x-1)^2 (2x+3) x
        let p = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[3, 2])).mul(&up(&[0, 1]));
        let (roots, rest) = p.rational_roots();
        assert_eq!(rest.degree(), Some(0));
        assert!(roots.contains(&(rat(1), 2)));
        assert!(roots.contains(&(ratio(-3, 2), 1)));
        assert!(roots.contains(&(rat(0), 1)));
    }

    #[test]
    fn quadratic_irrational_roots() {
        let p = up(&[-2, 0, 1]);
        let (roots, rest) = p.split();
        assert!(rest.is_none());
        assert_eq!(roots.len(), 2);
        for (r, _) in roots {
            assert!(p.eval_surd(&r).is_zero());
        }
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x-1, x-3) = 1 - 3 = -2 under the Sylvester convention
        assert_eq!(resultant(&up(&[-1, 1]), &up(&[-3, 1])), rat(-2));
        assert_eq!(resultant(&up(&[-1, 0, 1]), &up(&[-1, 1])), rat(0));
    }

    #[test]
    fn residue_polynomial_roots_are_residues() {
        // 1/(x(x-1)) has residues -1 and 1
        let f = RatFun1::new("x", up(&[1]), up(&[0, -1, 1]));
        let (roots, _) = f.residue_polynomial().rational_roots();
        let mut rs: Vec<Rat> = roots.into_iter().map(|(r, _)| r).collect();
        rs.sort();
        assert_eq!(rs, vec![rat(-1), rat(1)]);
    }
}
