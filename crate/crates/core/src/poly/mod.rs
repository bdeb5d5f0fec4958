//! Dense univariate polynomials over a [`FieldSpec`].

mod factor_fq;
mod factor_q;
pub(crate) mod zmod;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::basefield::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

pub use factor_fq::{factor_mod_q, is_irreducible_mod_q, squarefree_mod_q};
pub use factor_q::{factor_over_q, FACTOR_DEGREE_BOUND};

/// Polynomial with ascending coefficients; the leading coefficient is
/// nonzero unless the polynomial is zero (empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<FieldElem>,
}

/// `f = content * prod g_m^m` with squarefree, pairwise coprime monic `g_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub content: FieldElem,
    pub parts: Vec<(Poly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> Poly {
        let spec = self.content.spec();
        let mut acc = Poly::constant(self.content.clone());
        for (g, m) in &self.parts {
            acc = &acc * &g.pow(*m);
        }
        debug_assert_eq!(acc.spec(), spec);
        acc
    }

    /// Product of the parts: the monic radical.
    pub fn radical(&self) -> Poly {
        let spec = self.content.spec();
        self.parts
            .iter()
            .fold(Poly::one(spec), |acc, (g, _)| &acc * g)
    }
}

impl Poly {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.spec() == spec));
        Poly { spec, coeffs }
    }

    pub fn zero(spec: FieldSpec) -> Poly {
        Poly {
            spec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(spec: FieldSpec) -> Poly {
        Poly::constant(spec.one())
    }

    pub fn constant(c: FieldElem) -> Poly {
        let spec = c.spec();
        Poly::new(spec, vec![c])
    }

    /// The variable `x`.
    pub fn x(spec: FieldSpec) -> Poly {
        Poly::new(spec, vec![spec.zero(), spec.one()])
    }

    pub fn monomial(c: FieldElem, k: usize) -> Poly {
        let spec = c.spec();
        let mut coeffs = vec![spec.zero(); k];
        coeffs.push(c);
        Poly::new(spec, coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &FieldElem) -> Poly {
        let spec = r.spec();
        Poly::new(spec, vec![-r, spec.one()])
    }

    pub fn from_i64s(spec: FieldSpec, cs: &[i64]) -> Poly {
        Poly::new(spec, cs.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElem::is_one)
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::new(self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.spec.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.spec.from_i64(i as i64))
            .collect();
        Poly::new(self.spec, coeffs)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.spec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(self.spec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Quotient and remainder with `deg(rem) < deg(b)`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.deg();
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(self.spec), self.clone()));
        }
        let inv_lc = b.lc().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.spec.zero(); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + db] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * bc);
            }
            quot[i] = c;
        }
        rem.truncate(db);
        Ok((Poly::new(self.spec, quot), Poly::new(self.spec, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.divmod(b).expect("nonzero modulus").1
    }

    /// Division that must be exact.
    pub fn exact_div(&self, b: &Poly) -> Poly {
        let (q, r) = self.divmod(b).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn mul_mod(&self, b: &Poly, m: &Poly) -> Poly {
        (self * b).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.spec).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, b: &Poly) -> Poly {
        let (mut r0, mut r1) = (self.clone(), b.clone());
        while !r1.is_zero() {
            let r = r0.rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
        }
        r0.monic()
    }

    /// `(g, u, v)` with `g` monic, `g = gcd(a, b)` and `u a + v b = g`.
    pub fn xgcd(&self, b: &Poly) -> (Poly, Poly, Poly) {
        let spec = self.spec;
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut u0, mut u1) = (Poly::one(spec), Poly::zero(spec));
        let (mut v0, mut v1) = (Poly::zero(spec), Poly::one(spec));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let u = &u0 - &(&q * &u1);
            u0 = std::mem::replace(&mut u1, u);
            let v = &v0 - &(&q * &v1);
            v0 = std::mem::replace(&mut v1, v);
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, or the nontrivial gcd as an error value.
    pub fn inv_mod(&self, m: &Poly) -> std::result::Result<Poly, Poly> {
        let (g, u, _) = self.rem(m).xgcd(m);
        if g.is_one() {
            Ok(u.rem(m))
        } else {
            Err(g)
        }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    fn pseudo_rem(&self, b: &Poly) -> Poly {
        let delta = self.deg() + 1 - b.deg();
        let scaled = self.scale(&b.lc().pow(delta as i64).unwrap());
        scaled.rem(b)
    }

    /// Resultant `lc(a)^deg(b) * prod b(alpha_i)` over the roots of `a`,
    /// computed with the subresultant pseudo-remainder sequence.
    pub fn resultant(&self, b: &Poly) -> FieldElem {
        let spec = self.spec;
        if self.is_zero() || b.is_zero() {
            return spec.zero();
        }
        // Over Q, strip denominators and integer content first.
        let (mut a, mut bb, mut t) = (self.clone(), b.clone(), spec.one());
        if spec == FieldSpec::Rationals {
            let (ca, pa) = a.primitive_integer_part();
            let (cb, pb) = bb.primitive_integer_part();
            t = &FieldElem::Rational(ca).pow(bb.deg() as i64).unwrap()
                * &FieldElem::Rational(cb).pow(a.deg() as i64).unwrap();
            a = pa;
            bb = pb;
        }
        let mut s = spec.one();
        if a.deg() < bb.deg() {
            if a.deg() % 2 == 1 && bb.deg() % 2 == 1 {
                s = -&s;
            }
            std::mem::swap(&mut a, &mut bb);
        }
        let mut g = spec.one();
        let mut h = spec.one();
        while bb.deg() > 0 {
            let delta = (a.deg() - bb.deg()) as i64;
            if a.deg() % 2 == 1 && bb.deg() % 2 == 1 {
                s = -&s;
            }
            let r = a.pseudo_rem(&bb);
            if r.is_zero() {
                return spec.zero();
            }
            a = bb;
            let divisor = &g * &h.pow(delta).unwrap();
            bb = r.scale(&divisor.inv().unwrap());
            g = a.lc();
            h = &h.pow(1 - delta).unwrap() * &g.pow(delta).unwrap();
        }
        let da = a.deg() as i64;
        let hh = &h.pow(1 - da).unwrap() * &bb.lc().pow(da).unwrap();
        &(&s * &t) * &hh
    }

    /// Over Q: `(c, P)` with `self = c * P`, `P` primitive with integer
    /// coefficients and positive leading coefficient.
    pub fn primitive_integer_part(&self) -> (BigRational, Poly) {
        let ints = self.to_primitive_integers();
        let p = Poly::new(
            self.spec,
            ints.iter()
                .map(|c| FieldElem::Rational(BigRational::from_integer(c.clone())))
                .collect(),
        );
        if self.is_zero() {
            return (BigRational::one(), p);
        }
        let c = match (self.lc(), p.lc()) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => a / b,
            _ => unreachable!("integer parts are only defined over Q"),
        };
        (c, p)
    }

    /// Integer coefficient vector of the primitive part (Q only).
    pub fn to_primitive_integers(&self) -> Vec<BigInt> {
        let rats: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().expect("rational coefficients"))
            .collect();
        if rats.is_empty() {
            return Vec::new();
        }
        let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * &den).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for c in ints.iter_mut() {
            *c = &*c / &content * &sign;
        }
        ints
    }

    pub fn from_integers(spec: FieldSpec, cs: &[BigInt]) -> Poly {
        Poly::new(spec, cs.iter().map(|c| spec.from_bigint(c)).collect())
    }

    /// Map coefficients into another base field (e.g. reduce Q -> F_q).
    pub fn map_to(&self, target: FieldSpec) -> Result<Poly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let r = c.as_rational().ok_or_else(|| {
                Error::FieldMismatch(format!("cannot map {} into {target}", self.spec))
            })?;
            out.push(target.from_rational(&r)?);
        }
        Ok(Poly::new(target, out))
    }

    /// Yun's square-free decomposition.
    pub fn yun_squarefree(&self) -> Result<SquarefreeDecomposition> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ch = self.spec.characteristic();
        if ch != 0 && ch <= self.deg() as u64 {
            return Err(Error::CharacteristicTooSmall(self.deg()));
        }
        let content = self.lc();
        let f = self.monic();
        let mut parts = Vec::new();
        if f.deg() == 0 {
            return Ok(SquarefreeDecomposition { content, parts });
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1u32;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            let nb = b.exact_div(&a);
            let nc = d.exact_div(&a);
            if a.deg() > 0 {
                parts.push((a, i));
            }
            d = &nc - &nb.derivative();
            b = nb;
            i += 1;
        }
        Ok(SquarefreeDecomposition { content, parts })
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg() == 0
    }

    /// Discriminant up to sign and leading-coefficient normalization:
    /// `Res(f, f')` of the monic polynomial.
    pub fn discriminant_monic(&self) -> FieldElem {
        let m = self.monic();
        m.resultant(&m.derivative())
    }

    /// Ascending coefficient text, e.g. `1 0 1`.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the ascending coefficient format.
    pub fn parse(spec: FieldSpec, s: &str) -> Result<Poly> {
        let mut coeffs = Vec::new();
        for tok in s.split_whitespace() {
            coeffs.push(spec.parse_elem(tok)?);
        }
        Ok(Poly::new(spec, coeffs))
    }

    /// Human-readable form in the given variable.
    pub fn pretty(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c = &c
                .as_rational()
                .map_or_else(|| c.clone(), FieldElem::Rational);
            let (neg, mag) = if c.is_negative_rational() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = if mag.is_compound() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if mono.is_empty() {
                out.push_str(&coef);
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{coef}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(self.spec, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.spec, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Poly::new(self.spec, coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.spec);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.spec, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
