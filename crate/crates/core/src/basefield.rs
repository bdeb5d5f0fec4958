//! Exact base-field arithmetic: the rationals, prime fields `F_q` and the
//! cyclotomic fields `Q(zeta_p)` for `p` in {3, 5, 7}.
//!
//! Every value is kept in canonical form so that equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Which base field `k` we compute in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    FinitePrime(u64),
    /// `Q(zeta_p)`, elements stored as coefficient vectors modulo `Phi_p`.
    Cyclotomic(u32),
}

/// An element of a base field in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Residue { q: u64, v: u64 },
    Cyclotomic { p: u32, coeffs: Vec<BigRational> },
}

impl FieldSpec {
    pub fn validate(self) -> Result<Self> {
        match self {
            FieldSpec::Rationals => Ok(self),
            FieldSpec::FinitePrime(q) if is_prime(q) => Ok(self),
            FieldSpec::FinitePrime(q) => Err(Error::UnsupportedBase(format!("{q} is not prime"))),
            FieldSpec::Cyclotomic(3 | 5 | 7) => Ok(self),
            FieldSpec::Cyclotomic(p) => Err(Error::UnsupportedBase(format!(
                "Q(zeta_{p}) is not supported"
            ))),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::FinitePrime(q) => q,
            _ => 0,
        }
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldElem {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every base field")
    }

    /// Image of a rational number; fails in `F_q` when `q` divides the denominator.
    pub fn from_rational(self, r: &BigRational) -> Result<FieldElem> {
        match self {
            FieldSpec::Rationals => Ok(FieldElem::Rational(r.clone())),
            FieldSpec::FinitePrime(q) => {
                let m = BigInt::from(q);
                let num = r.numer().mod_floor(&m).to_u64().unwrap();
                let den = r.denom().mod_floor(&m).to_u64().unwrap();
                let inv = inv_mod(den, q).ok_or(Error::DivisionByZero)?;
                Ok(FieldElem::Residue {
                    q,
                    v: mul_mod(num, inv, q),
                })
            }
            FieldSpec::Cyclotomic(p) => {
                let mut coeffs = vec![BigRational::zero(); p as usize - 1];
                coeffs[0] = r.clone();
                Ok(FieldElem::Cyclotomic { p, coeffs })
            }
        }
    }

    /// The fixed primitive `p`-th root of unity of this field.
    ///
    /// For `F_q` this is the smallest positive residue of order exactly `p`;
    /// for `Q(zeta_p)` it is the class of `x`; `-1` serves for `p = 2`.
    pub fn primitive_pth_root(self, p: u32) -> Result<FieldElem> {
        if p == 2 && self.characteristic() != 2 {
            return Ok(self.from_i64(-1));
        }
        match self {
            FieldSpec::Rationals => Err(Error::NoPthRoot(p)),
            FieldSpec::FinitePrime(q) => {
                let p64 = p as u64;
                if q % p64 != 1 {
                    return Err(Error::NoPthRoot(p));
                }
                (2..q)
                    .find(|&v| pow_mod(v, p64, q) == 1)
                    .map(|v| FieldElem::Residue { q, v })
                    .ok_or(Error::NoPthRoot(p))
            }
            FieldSpec::Cyclotomic(r) if r == p => {
                let mut coeffs = vec![BigRational::zero(); p as usize - 1];
                coeffs[1] = BigRational::one();
                Ok(FieldElem::Cyclotomic { p, coeffs })
            }
            FieldSpec::Cyclotomic(_) => Err(Error::NoPthRoot(p)),
        }
    }

    /// Parse a field literal: `a/b` or `a` over Q, a decimal residue over
    /// `F_q`, and `c0,c1,...` over `Q(zeta_p)`.
    pub fn parse_elem(self, s: &str) -> Result<FieldElem> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("bad field literal '{s}'"),
        };
        let parse_rat = |t: &str| -> Result<BigRational> {
            let t = t.trim();
            if let Some((a, b)) = t.split_once('/') {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(a, b))
            } else {
                Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?))
            }
        };
        match self {
            FieldSpec::Rationals => Ok(FieldElem::Rational(parse_rat(s)?)),
            FieldSpec::FinitePrime(_) => self.from_rational(&parse_rat(s)?),
            FieldSpec::Cyclotomic(p) => {
                let parts: Vec<&str> = s.split(',').collect();
                let mut coeffs = Vec::with_capacity(parts.len());
                for part in parts {
                    coeffs.push(parse_rat(part)?);
                }
                Ok(cyclo_reduce(p, coeffs))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::FinitePrime(q) => write!(f, "Fq {q}"),
            FieldSpec::Cyclotomic(p) => write!(f, "Zeta {p}"),
        }
    }
}

/// Reduce a coefficient vector of arbitrary length modulo `Phi_p`.
fn cyclo_reduce(p: u32, raw: Vec<BigRational>) -> FieldElem {
    let p = p as usize;
    let mut folded = vec![BigRational::zero(); p];
    for (i, c) in raw.into_iter().enumerate() {
        folded[i % p] += c;
    }
    let top = folded[p - 1].clone();
    let coeffs = folded[..p - 1].iter().map(|c| c - &top).collect();
    FieldElem::Cyclotomic {
        p: p as u32,
        coeffs,
    }
}

fn mismatch(a: &FieldElem, b: &FieldElem) -> ! {
    panic!("field mismatch: {} vs {}", a.spec(), b.spec())
}

impl FieldElem {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElem::Rational(_) => FieldSpec::Rationals,
            FieldElem::Residue { q, .. } => FieldSpec::FinitePrime(*q),
            FieldElem::Cyclotomic { p, .. } => FieldSpec::Cyclotomic(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Residue { v, .. } => *v == 0,
            FieldElem::Cyclotomic { coeffs, .. } => coeffs.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec().one()
    }

    /// The rational value, when the element lies in the prime field Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            FieldElem::Rational(r) => Some(r.clone()),
            FieldElem::Cyclotomic { coeffs, .. } => {
                if coeffs[1..].iter().all(Zero::is_zero) {
                    Some(coeffs[0].clone())
                } else {
                    None
                }
            }
            FieldElem::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            FieldElem::Residue { v, .. } => Some(*v),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(r) => FieldElem::Rational(r.recip()),
            FieldElem::Residue { q, v } => FieldElem::Residue {
                q: *q,
                v: inv_mod(*v, *q).unwrap(),
            },
            FieldElem::Cyclotomic { p, coeffs } => cyclo_inverse(*p, coeffs),
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        if let FieldElem::Residue { q, v } = &base {
            return Ok(FieldElem::Residue {
                q: *q,
                v: pow_mod(*v, e, *q),
            });
        }
        let mut acc = self.spec().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }
}

/// Solve `a * x = 1` in `Q(zeta_p)` through the multiplication matrix.
fn cyclo_inverse(p: u32, a: &[BigRational]) -> FieldElem {
    let n = p as usize - 1;
    let spec = FieldSpec::Cyclotomic(p);
    // Column j of the matrix is a * x^j.
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut raw = vec![BigRational::zero(); j];
        raw.extend(a.iter().cloned());
        match cyclo_reduce(p, raw) {
            FieldElem::Cyclotomic { coeffs, .. } => cols.push(coeffs),
            _ => unreachable!(),
        }
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| cols[j][i].clone()).collect();
            row.push(if i == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            });
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n)
            .find(|&r| !m[r][c].is_zero())
            .expect("nonzero element is invertible");
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for k in c..=n {
                    let t = &m[c][k] * &factor;
                    m[r][k] -= t;
                }
            }
        }
    }
    let coeffs: Vec<BigRational> = m.into_iter().map(|row| row[n].clone()).collect();
    debug_assert_eq!(spec, FieldSpec::Cyclotomic(p));
    FieldElem::Cyclotomic { p, coeffs }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Residue { q, v }, FieldElem::Residue { q: q2, v: w }) if q == q2 => {
                FieldElem::Residue {
                    q: *q,
                    v: (v + w) % q,
                }
            }
            (
                FieldElem::Cyclotomic { p, coeffs: a },
                FieldElem::Cyclotomic { p: p2, coeffs: b },
            ) if p == p2 => FieldElem::Cyclotomic {
                p: *p,
                coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect(),
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Residue { q, v } => FieldElem::Residue {
                q: *q,
                v: (q - v) % q,
            },
            FieldElem::Cyclotomic { p, coeffs } => FieldElem::Cyclotomic {
                p: *p,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Residue { q, v }, FieldElem::Residue { q: q2, v: w }) if q == q2 => {
                FieldElem::Residue {
                    q: *q,
                    v: mul_mod(*v, *w, *q),
                }
            }
            (
                FieldElem::Cyclotomic { p, coeffs: a },
                FieldElem::Cyclotomic { p: p2, coeffs: b },
            ) if p == p2 => {
                let mut raw = vec![BigRational::zero(); a.len() + b.len()];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        raw[i + j] += x * y;
                    }
                }
                cyclo_reduce(*p, raw)
            }
            _ => mismatch(self, rhs),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => write!(f, "{}", fmt_rat(r)),
            FieldElem::Residue { v, .. } => write!(f, "{v}"),
            FieldElem::Cyclotomic { coeffs, .. } => {
                let parts: Vec<String> = coeffs.iter().map(fmt_rat).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FieldElem {
    /// Whether the displayed literal needs parentheses inside a sum.
    pub fn is_compound(&self) -> bool {
        match self {
            FieldElem::Rational(r) => !r.is_integer(),
            FieldElem::Residue { .. } => false,
            FieldElem::Cyclotomic { coeffs, .. } => coeffs[1..].iter().any(|c| !c.is_zero()),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, FieldElem::Rational(r) if r.is_negative())
    }
}

/// Rational reconstruction: find `a/b` with `|a|, b <= floor(sqrt(m/2))`,
/// `gcd(b, m) = 1` and `a = r b (mod m)`.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !s1.gcd(m).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> FieldElem {
        FieldElem::Rational(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(2, 3) + &q(1, 6), q(5, 6));
    }

    #[test]
    fn fq_root_of_unity() {
        let k = FieldSpec::FinitePrime(5);
        assert_eq!(k.primitive_pth_root(2).unwrap(), k.from_i64(4));
        let k7 = FieldSpec::FinitePrime(7);
        let z = k7.primitive_pth_root(3).unwrap();
        assert_eq!(z, k7.from_i64(2));
        assert!(matches!(
            FieldSpec::FinitePrime(5).primitive_pth_root(3),
            Err(Error::NoPthRoot(3))
        ));
        assert!(matches!(
            FieldSpec::Rationals.primitive_pth_root(3),
            Err(Error::NoPthRoot(3))
        ));
    }

    #[test]
    fn cyclotomic_zeta_cubed() {
        for p in [3u32, 5, 7] {
            let k = FieldSpec::Cyclotomic(p);
            let z = k.primitive_pth_root(p).unwrap();
            assert_ne!(z, k.one());
            assert_eq!(z.pow(p as i64).unwrap(), k.one());
        }
        let k = FieldSpec::Cyclotomic(3);
        let z = k.primitive_pth_root(3).unwrap();
        assert_eq!(&(&z * &z) * &z, k.one());
    }

    #[test]
    fn cyclotomic_inverse() {
        let k = FieldSpec::Cyclotomic(5);
        let a = k.parse_elem("1,2,0,-3").unwrap();
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, k.one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            FieldSpec::Rationals.zero().inv(),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            FieldSpec::FinitePrime(7).zero().inv(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn reconstruct_examples() {
        let m = BigInt::from(101);
        assert_eq!(
            rational_reconstruct(&BigInt::from(2), &m),
            Some(BigRational::from_integer(2.into()))
        );
        assert_eq!(
            rational_reconstruct(&BigInt::from(51), &m),
            Some(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(
            rational_reconstruct(&BigInt::from(50), &m),
            Some(BigRational::new((-1).into(), 2.into()))
        );
    }

    /// Exhaustive scan of all a/b with |a|, b <= 7, the independent oracle for m = 101.
    #[test]
    fn reconstruct_matches_scan() {
        let m = 101i64;
        let bound = 7i64;
        for r in 0..m {
            let mut found = None;
            for b in 1..=bound {
                for a in -bound..=bound {
                    if (a - r * b).rem_euclid(m) == 0 && num_integer::gcd(a, b) == 1 {
                        found = Some(BigRational::new(a.into(), b.into()));
                    }
                }
            }
            let got = rational_reconstruct(&BigInt::from(r), &BigInt::from(m));
            if let Some(f) = found {
                assert_eq!(got, Some(f), "r = {r}");
            } else {
                assert_eq!(got, None, "r = {r}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let k = FieldSpec::Rationals;
        assert_eq!(k.parse_elem("-3/6").unwrap().to_string(), "-1/2");
        let c = FieldSpec::Cyclotomic(3).parse_elem("0,0,1").unwrap();
        // x^2 = -1 - x modulo x^2 + x + 1
        assert_eq!(c.to_string(), "-1,-1");
        assert_eq!(
            FieldSpec::FinitePrime(7)
                .parse_elem("-1")
                .unwrap()
                .to_string(),
            "6"
        );
    }
}
