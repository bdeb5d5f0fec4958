//! Integer polynomials (ascending `BigInt` vectors) reduced modulo `m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{inv_mod_big, symmetric_mod};

pub type ZPoly = Vec<BigInt>;

pub fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn reduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

pub fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| symmetric_mod(c, m)).collect())
}

pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    reduce(&v, m)
}

pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    reduce(&v, m)
}

pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

pub fn scale(a: &[BigInt], c: &BigInt, m: &BigInt) -> ZPoly {
    reduce(&a.iter().map(|x| x * c).collect::<Vec<_>>(), m)
}

/// Division by a polynomial whose leading coefficient is a unit mod `m`.
pub fn divmod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let b = reduce(b, m);
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let inv = inv_mod_big(&b[db], m).expect("unit leading coefficient");
    let mut r = reduce(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = (&r[i + db] * &inv).mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * bc).mod_floor(m);
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn one() -> ZPoly {
    vec![BigInt::one()]
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1` modulo `m`
/// to the same relations modulo `m^2`. `f` and `h` must be monic.
#[allow(clippy::type_complexity)]
pub fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = sub(f, &mul(g, h, &m2), &m2);
    let (q, r) = divmod(&mul(s, &e, &m2), h, &m2);
    let g1 = add(&add(g, &mul(t, &e, &m2), &m2), &mul(&q, g, &m2), &m2);
    let h1 = add(h, &r, &m2);
    let b = sub(&add(&mul(s, &g1, &m2), &mul(t, &h1, &m2), &m2), &one(), &m2);
    let (c, d) = divmod(&mul(s, &b, &m2), &h1, &m2);
    let s1 = sub(s, &d, &m2);
    let t1 = sub(&sub(t, &mul(t, &b, &m2), &m2), &mul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}
