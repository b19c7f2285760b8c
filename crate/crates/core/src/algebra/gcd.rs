//! Multivariate gcd over the rationals by recursive primitive PRS.
//!
//! The polynomial is viewed as univariate in its largest variable with
//! coefficients in the remaining ones; contents are handled recursively.
//! Expressions in this crate stay small, so no modular method is needed.

use super::poly::MPoly;
use super::var::Var;

/// Monic gcd (leading coefficient 1 under the term order).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        return monomial_gcd(a, b);
    }
    if a == b {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    if va.is_disjoint(&vb) {
        return MPoly::one();
    }
    let v = *va.union(&vb).max().expect("nonconstant polynomials have variables");
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca_list = a.coeffs_in(v);
    let cb_list = b.coeffs_in(v);
    let ca = content(&ca_list);
    let cb = content(&cb_list);
    let c = gcd(&ca, &cb);
    let mut p = divide_all(&ca_list, &ca);
    let mut q = divide_all(&cb_list, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q);
        if r.is_empty() {
            break q;
        }
        if r.len() == 1 {
            break vec![MPoly::one()];
        }
        p = q;
        let cr = content(&r);
        q = rational_primitive(v, &divide_all(&r, &cr));
    };
    let gc = content(&g);
    let g = divide_all(&g, &gc);
    (&MPoly::from_coeffs(v, &g) * &c).monic()
}

/// Gcd of several polynomials.
pub fn gcd_many(ps: &[MPoly]) -> MPoly {
    content(ps)
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let (mono, other) = if a.is_monomial() { (a, b) } else { (b, a) };
    let mut m = mono.leading().unwrap().0.clone();
    for (n, _) in other.terms() {
        m = m.gcd(n);
        if m.is_one() {
            break;
        }
    }
    MPoly::term(num_traits::One::one(), m)
}

/// Gcd of a list, stopping early once it reaches 1.
fn content(list: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for c in list {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        MPoly::one()
    } else {
        g
    }
}

fn content_in(p: &MPoly, v: Var) -> MPoly {
    content(&p.coeffs_in(v))
}

fn divide_all(list: &[MPoly], c: &MPoly) -> Vec<MPoly> {
    list.iter()
        .map(|x| x.exact_div(c).expect("content divides every coefficient"))
        .collect()
}

/// Strips the rational content so remainder coefficients stay small.
fn rational_primitive(v: Var, list: &[MPoly]) -> Vec<MPoly> {
    MPoly::from_coeffs(v, list).primitive().coeffs_in(v)
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder of `a` by `b` as coefficient lists in the main variable.
/// Returns an empty list for the zero remainder.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &lr * bj;
            r[j + shift] = &r[j + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

/// Least common multiple, monic.
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    (&a.exact_div(&g).expect("gcd divides") * b).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn v(n: &str) -> MPoly {
        MPoly::var(Var::new(n))
    }

    #[test]
    fn gcd_of_products() {
        let a = v("a");
        let b = v("b");
        let c = v("c");
        let f1 = &(&a + &b) * &(&a - &c);
        let f2 = &(&a + &b) * &(&(&b * &c) + &MPoly::from_int(1));
        let g = gcd(&f1, &f2);
        assert_eq!(g, (&a + &b).monic());
    }

    #[test]
    fn gcd_with_monomial() {
        let a = v("a");
        let b = v("b");
        let p = &(&a * &a) * &(&b + &MPoly::one());
        let g = gcd(&p, &(&a * &b));
        assert_eq!(g, a);
    }

    #[test]
    fn gcd_scaled_inputs() {
        let a = v("a");
        let b = v("b");
        let f = (&a.pow(2) + &(&a * &b)).scale(&rat(6));
        let g = gcd(&f, &a.scale(&rat(4)));
        assert_eq!(g, a);
        let h = gcd(&f, &(&(&a + &b) * &(&a - &b)));
        assert_eq!(h, (&a + &b).monic());
    }

    #[test]
    fn coprime_gives_one() {
        let a = v("a");
        let b = v("b");
        let g = gcd(&(&a.pow(2) + &b), &(&a + &b.pow(2)));
        assert!(g.is_one());
    }
}
