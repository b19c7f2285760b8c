//! 2x2 matrices over a quadratic field and their action on quadratic pairs.

use std::fmt;

use serde::Serialize;

use super::QuadPair;
use crate::algebra::surd::Surd;

/// Row-major 2x2 matrix. As a change of variables it means
/// `(Y, Z) = M (y, z)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2(pub [[Surd; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([[Surd::one(), Surd::zero()], [Surd::zero(), Surd::one()]])
    }

    pub fn from_rows(r0: [Surd; 2], r1: [Surd; 2]) -> Mat2 {
        Mat2([r0, r1])
    }

    pub fn det(&self) -> Surd {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det().inv()?;
        let m = &self.0;
        Some(Mat2([
            [&m[1][1] * &d, &(-&m[0][1]) * &d],
            [&(-&m[1][0]) * &d, &m[0][0] * &d],
        ]))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn scale(&self, c: &Surd) -> Mat2 {
        Mat2(self.0.clone().map(|row| row.map(|x| &x * c)))
    }

    pub fn apply(&self, v: &[Surd; 2]) -> [Surd; 2] {
        let m = &self.0;
        [&(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1]), &(&m[1][0] * &v[0]) + &(&m[1][1] * &v[1])]
    }

    /// Coefficients of the field in the new variables `(Y, Z) = M (y, z)`,
    /// ordered as `P(Y^2, YZ, Z^2), Q(Y^2, YZ, Z^2)`. `None` if singular.
    pub fn transform(&self, q: &QuadPair) -> Option<[Surd; 6]> {
        Some(transform_surd(self, &self.inverse()?, &q.to_surds()))
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_rational())
    }
}

/// `X' = L F(N X)` with `N = L^{-1}`.
pub fn transform_surd(l: &Mat2, n: &Mat2, c: &[Surd; 6]) -> [Surd; 6] {
    let [n11, n12] = &n.0[0];
    let [n21, n22] = &n.0[1];
    let two = Surd::rational(crate::algebra::rat::rat(2));
    // y^2, yz, z^2 expressed in Y^2, YZ, Z^2
    let yy = [n11 * n11, &(&two * n11) * n12, n12 * n12];
    let yz = [n11 * n21, &(n11 * n22) + &(n12 * n21), n12 * n22];
    let zz = [n21 * n21, &(&two * n21) * n22, n22 * n22];
    let form = |a: &Surd, b: &Surd, cc: &Surd| -> [Surd; 3] {
        std::array::from_fn(|k| &(&(a * &yy[k]) + &(b * &yz[k])) + &(cc * &zz[k]))
    };
    let pn = form(&c[0], &c[1], &c[2]);
    let qn = form(&c[3], &c[4], &c[5]);
    let comb = |r: &[Surd; 2]| -> [Surd; 3] { std::array::from_fn(|k| &(&r[0] * &pn[k]) + &(&r[1] * &qn[k])) };
    let p2 = comb(&l.0[0]);
    let q2 = comb(&l.0[1]);
    [p2[0].clone(), p2[1].clone(), p2[2].clone(), q2[0].clone(), q2[1].clone(), q2[2].clone()]
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.0.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}
