//! Exact arithmetic in `Q(sqrt(d))`, `d` a squarefree integer (negative
//! values give imaginary quadratic fields).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{fmt_rat, rat_to_f64, Rat};

/// `a + b*sqrt(d)`; when `b == 0` the radicand is irrelevant and stored as 0.
#[derive(Clone, Eq)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub d: BigInt,
}

impl PartialEq for Surd {
    fn eq(&self, o: &Surd) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

impl std::hash::Hash for Surd {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.a.hash(h);
        self.b.hash(h);
        if !self.b.is_zero() {
            self.d.hash(h);
        }
    }
}

impl Surd {
    pub fn rational(a: Rat) -> Surd {
        Surd { a, b: Rat::zero(), d: BigInt::zero() }
    }

    pub fn new(a: Rat, b: Rat, d: BigInt) -> Surd {
        if b.is_zero() || d.is_zero() {
            Surd::rational(a)
        } else {
            Surd { a, b, d }
        }
    }

    pub fn zero() -> Surd {
        Surd::rational(Rat::zero())
    }

    pub fn one() -> Surd {
        Surd::rational(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    fn radicand(&self, o: &Surd) -> BigInt {
        match (self.b.is_zero(), o.b.is_zero()) {
            (true, _) => o.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, o.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }

    pub fn conj(&self) -> Surd {
        Surd::new(self.a.clone(), -&self.b, self.d.clone())
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(Surd::new(&c.a / &n, &c.b / &n, c.d))
    }

    pub fn to_c64(&self) -> Complex64 {
        let d = self.d.to_f64().unwrap_or(0.0);
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let d = self.radicand(o);
        Surd::new(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        self + &(-o)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.d.clone())
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let d = self.radicand(o);
        let dr = Rat::from_integer(d.clone());
        Surd::new(
            &self.a * &o.a + dr * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
}

impl Div for &Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Surd) -> Surd {
        self * &o.inv().expect("division by zero surd")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let bb = self.b.abs();
        let coeff = if bb.is_one() { String::new() } else { format!("{}*", fmt_rat(&bb)) };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt({})", self.d)
        } else {
            write!(f, "{} {sign} {coeff}sqrt({})", fmt_rat(&self.a), self.d)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes a nonzero integer `n` as `s^2 * r` with `r` squarefree (sign kept
/// in `r`). Trial division; fine for the magnitudes met here.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            r *= &p;
        }
        p += 1u32;
    }
    r *= m;
    (s, sign * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn field_ops() {
        let x = Surd::new(rat(1), rat(1), BigInt::from(2));
        let y = &x * &x.conj();
        assert_eq!(y, Surd::rational(rat(-1)));
        let z = &Surd::one() / &x;
        assert_eq!(&z * &x, Surd::one());
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_decompose(&BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(squarefree_decompose(&BigInt::from(-12)), (BigInt::from(2), BigInt::from(-3)));
    }
}
