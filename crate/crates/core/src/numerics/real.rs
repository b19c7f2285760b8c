//! Real scalars the integrator runs over: `f64` and double-double.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Num, One, ToPrimitive};
use twofloat::TwoFloat;

use crate::algebra::rat::GaussRat;
use crate::algebra::Rat;

pub trait Real: Copy + Debug + Send + Sync + PartialOrd + Num + Neg<Output = Self> + 'static {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn pi() -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    /// Exact for integers up to about 106 bits in double-double.
    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self::from_f64(hi);
        }
        let rest = n - BigInt::from(hi as i128);
        Self::from_f64(hi) + Self::from_f64(rest.to_f64().unwrap_or(0.0))
    }

    fn from_rat(r: &Rat) -> Self {
        Self::from_bigint(r.numer()) / Self::from_bigint(r.denom())
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
}

/// Double-double scalar. Wraps `TwoFloat`, correcting its division by one
/// residual step and computing sine and cosine by series.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Dd(pub TwoFloat);

impl Dd {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }
}

macro_rules! dd_op {
    ($tr:ident, $f:ident, $op:tt) => {
        impl std::ops::$tr for Dd {
            type Output = Dd;
            fn $f(self, o: Dd) -> Dd {
                Dd(self.0 $op o.0)
            }
        }
    };
}
dd_op!(Add, add, +);
dd_op!(Sub, sub, -);
dd_op!(Mul, mul, *);
dd_op!(Rem, rem, %);

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q = self.0 / o.0;
        let r = self.0 - o.0 * q;
        Dd(q + r / o.0.hi())
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl num_traits::Zero for Dd {
    fn zero() -> Dd {
        Dd(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Dd {
        Dd(TwoFloat::from(1.0))
    }
}

impl Num for Dd {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(|x| Dd(TwoFloat::from(x)))
    }
}

/// Sine and cosine of a reduced argument, `|x| <= pi/4`.
fn dd_sin_cos_reduced(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut term = x;
    let mut sin = x;
    let mut k = 1.0;
    while term.0.hi().abs() > 1e-34 {
        term = -(term * x2) / Dd::from_f64((k + 1.0) * (k + 2.0));
        sin = sin + term;
        k += 2.0;
    }
    let mut term = Dd::one();
    let mut cos = term;
    let mut k = 0.0;
    while term.0.hi().abs() > 1e-34 {
        term = -(term * x2) / Dd::from_f64((k + 1.0) * (k + 2.0));
        cos = cos + term;
        k += 2.0;
    }
    (sin, cos)
}

impl Real for Dd {
    fn from_f64(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
    fn to_f64(self) -> f64 {
        self.0.hi() + self.0.lo()
    }
    fn sqrt(self) -> Self {
        if self.0.hi() <= 0.0 {
            return Dd(TwoFloat::from(self.0.hi().sqrt()));
        }
        // One Newton step on the double square root.
        let r = Dd::from_f64(self.0.hi().sqrt());
        r + (self - r * r) / (r * Dd::from_f64(2.0))
    }
    fn sin_cos(self) -> (Self, Self) {
        let half_pi = Dd(twofloat::consts::FRAC_PI_2);
        let k = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let x = self - half_pi * Dd::from_f64(k);
        let (s, c) = dd_sin_cos_reduced(x);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
    fn pi() -> Self {
        Dd(twofloat::consts::PI)
    }
    fn is_finite(self) -> bool {
        self.0.is_valid()
    }
}

pub type C<R> = Complex<R>;

pub fn cabs<R: Real>(z: C<R>) -> R {
    (z.re * z.re + z.im * z.im).sqrt()
}

pub fn cfinite<R: Real>(z: C<R>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn to_c64<R: Real>(z: C<R>) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<R: Real>(z: num_complex::Complex64) -> C<R> {
    C::new(R::from_f64(z.re), R::from_f64(z.im))
}

pub fn from_gauss<R: Real>(g: &GaussRat) -> C<R> {
    C::new(R::from_rat(&g.re), R::from_rat(&g.im))
}

/// `e^{i theta}`.
pub fn cis<R: Real>(theta: R) -> C<R> {
    let (s, c) = theta.sin_cos();
    C::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn rationals_convert_to_double_double_accurately() {
        let third: Dd = Real::from_rat(&ratio(1, 3));
        let back = third * Dd::from_f64(3.0) - Dd::one();
        assert!(back.abs().to_f64() < 1e-31, "{back:?}");
        let x: f64 = Real::from_rat(&ratio(-7, 4));
        assert_eq!(x, -1.75);
    }

    #[test]
    fn big_integers_keep_low_bits() {
        let n = BigInt::from(2).pow(60) + BigInt::from(1);
        let v: Dd = Real::from_bigint(&n);
        let diff = v - Dd::from_f64(2f64.powi(60));
        assert_eq!(diff.to_f64(), 1.0);
    }

    #[test]
    fn sine_matches_known_values() {
        let (s, _) = (Dd::pi() / Dd::from_f64(6.0)).sin_cos();
        assert!((s - Dd::from_f64(0.5)).abs().to_f64() < 1e-31);
        let (s, c) = Dd::from_f64(1.0).sin_cos();
        let want = Dd::from_f64(0.8414709848078965) + Dd::from_f64(1.776845092935536e-18);
        assert!((s - want).abs().to_f64() < 1e-31);
        assert!((c * c + s * s - Dd::one()).abs().to_f64() < 1e-30);
        let two = Dd::from_f64(2.0).sqrt();
        assert!((two * two - Dd::from_f64(2.0)).abs().to_f64() < 1e-31);
    }

    #[test]
    fn circle_points_have_unit_modulus() {
        for k in 0..8 {
            let th = Dd::from_f64(k as f64 * 0.7);
            let z = cis(th);
            assert!((cabs(z) - Dd::one()).abs().to_f64() < 1e-30, "{z:?}");
        }
    }
}
