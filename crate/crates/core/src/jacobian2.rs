//! Divisor classes on genus-2 curves `y^2 = f(x)` with `deg f = 6`, using
//! Cantor composition and reduction balanced at the two points at infinity.

use std::fmt;

use crate::basefield::{FieldElem, FieldSpec};
use crate::curve::{fiber_divisor, Curve, DivisorComponent, GoodDivisor};
use crate::descent::descent_class;
use crate::error::{Error, Result};
use crate::gamma::{ClassVerdict, Modulus};
use crate::poly::{factor_mod_q, factor_over_q, Poly};

/// The class of `D_{a,b} - (deg a / 2) m`, where `D_{a,b}` is the affine
/// divisor with Mumford coordinates `(a, b)` and `m` the divisor at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct MumfordClass {
    curve: Curve,
    a: Poly,
    b: Poly,
}

fn check_curve(curve: &Curve) -> Result<()> {
    if curve.p() != 2 || curve.degf() != 6 || curve.genus() != 2 {
        return Err(Error::Envelope(format!(
            "Mumford arithmetic needs y^2 = f(x) with deg f = 6 and genus 2, got {curve}"
        )));
    }
    Ok(())
}

impl MumfordClass {
    pub fn new(curve: &Curve, a: Poly, b: Poly) -> Result<MumfordClass> {
        check_curve(curve)?;
        if a.is_zero() || !a.is_monic() || !a.deg().is_multiple_of(2) {
            return Err(Error::NotOnCurve(format!(
                "a = {a} must be monic of even degree"
            )));
        }
        let b = b.rem(&a);
        if !(&b.mul_mod(&b, &a) - &curve.f().rem(&a)).is_zero() {
            return Err(Error::NotOnCurve(format!("b^2 != f mod {a}")));
        }
        reduce(curve, a, b)
    }

    pub fn identity(curve: &Curve) -> Result<MumfordClass> {
        check_curve(curve)?;
        let spec = curve.base();
        Ok(MumfordClass {
            curve: curve.clone(),
            a: Poly::one(spec),
            b: Poly::zero(spec),
        })
    }

    /// `(P1) + (P2) - m` for affine points with `x1 != x2`.
    pub fn from_points(
        curve: &Curve,
        p1: (&FieldElem, &FieldElem),
        p2: (&FieldElem, &FieldElem),
    ) -> Result<MumfordClass> {
        let (x1, y1) = p1;
        let (x2, y2) = p2;
        if !curve.is_on_curve(x1, y1) || !curve.is_on_curve(x2, y2) || x1 == x2 {
            return Err(Error::NotOnCurve(format!("({x1}, {y1}), ({x2}, {y2})")));
        }
        let a = &Poly::linear_root(x1) * &Poly::linear_root(x2);
        let slope = (y1 - y2).checked_div(&(x1 - x2))?;
        let b =
            &Poly::new(curve.base(), vec![-&(&slope * x1), slope]) + &Poly::constant(y1.clone());
        MumfordClass::new(curve, a, b)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one()
    }

    /// Whether `D_{a,b}` avoids the ramification points.
    pub fn is_good(&self) -> bool {
        self.a.gcd(self.curve.algebra().radical()).is_one()
    }

    pub fn neg(&self) -> MumfordClass {
        MumfordClass {
            curve: self.curve.clone(),
            a: self.a.clone(),
            b: (-&self.b).rem(&self.a),
        }
    }

    /// Cantor composition followed by balanced reduction.
    pub fn add(&self, other: &MumfordClass) -> Result<MumfordClass> {
        if self.curve != other.curve {
            return Err(Error::FieldMismatch("classes on different curves".into()));
        }
        let f = self.curve.f();
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let (d0, e1, e2) = a1.xgcd(a2);
        let (d, c1, c2) = d0.xgcd(&(b1 + b2));
        let (s1, s2, s3) = (&c1 * &e1, &c1 * &e2, c2);
        let a = (a1 * a2).exact_div(&(&d * &d));
        let num = &(&(&(&s1 * a1) * b2) + &(&(&s2 * a2) * b1)) + &(&s3 * &(&(b1 * b2) + f));
        let b = num.exact_div(&d).rem(&a);
        reduce(&self.curve, a, b)
    }

    pub fn sub(&self, other: &MumfordClass) -> Result<MumfordClass> {
        self.add(&other.neg())
    }

    /// The good divisor `D_{a,b} - (deg a / 2) fiber(r0)`, linearly
    /// equivalent to the class since `fiber(r0) - m = div(x - r0)`.
    pub fn to_divisor(&self, r0: &FieldElem) -> Result<GoodDivisor> {
        if !self.is_good() {
            return Err(Error::NotGood(format!(
                "{} meets the ramification points",
                self.a
            )));
        }
        let curve = &self.curve;
        let parts: Vec<(Poly, u32)> = match curve.base() {
            _ if self.a.is_one() => Vec::new(),
            FieldSpec::Rationals => factor_over_q(&self.a)?.1,
            FieldSpec::FinitePrime(_) => factor_mod_q(&self.a),
            other => {
                return Err(Error::UnsupportedBase(format!(
                    "Mumford divisors over {other}"
                )))
            }
        };
        let terms = parts
            .into_iter()
            .map(|(g, e)| {
                let b = self.b.rem(&g);
                (DivisorComponent::Horizontal { a: g, b }, e as i64)
            })
            .collect();
        let d = GoodDivisor::new(curve, terms)?;
        let fib = fiber_divisor(curve, r0, false)?;
        Ok(d.sub(&fib.scale(self.a.deg() as i64 / 2)))
    }
}

impl fmt::Display for MumfordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M {} ; {}",
            self.a.to_coeff_string(),
            self.b.to_coeff_string()
        )
    }
}

/// Replace `(a, b)` by `((f - b^2) / a, -b)` until `deg a <= 2`. Each step
/// uses `div(y - b) = D_{a,b} + D_{a',b} - 3m`, valid while
/// `deg(f - b^2) = 6`.
fn reduce(curve: &Curve, mut a: Poly, mut b: Poly) -> Result<MumfordClass> {
    while a.deg() > 2 {
        let rest = curve.f() - &(&b * &b);
        if rest.deg() != 6 {
            return Err(Error::NonGoodIntermediate);
        }
        a = rest.exact_div(&a).monic();
        b = (-&b).rem(&a);
    }
    Ok(MumfordClass {
        curve: curve.clone(),
        a,
        b,
    })
}

/// Verdict of `class(A) class(B) = class(A + B)` modulo `chi(L*) iota(k*)`.
pub fn homomorphism_check(
    a: &MumfordClass,
    b: &MumfordClass,
    r0: &FieldElem,
    budget: usize,
    seed: u64,
) -> Result<ClassVerdict> {
    let sum = a.add(b)?;
    let ca = descent_class(&a.to_divisor(r0)?, Modulus::ChiIota)?;
    let cb = descent_class(&b.to_divisor(r0)?, Modulus::ChiIota)?;
    let cs = descent_class(&sum.to_divisor(r0)?, Modulus::ChiIota)?;
    ca.mul(&cb).class_eq(&cs, budget, seed)
}

/// Degree-2 classes `D_{g, b mod g} - m` read off the factorization of
/// `f - b^2` for small integer `b`, in a deterministic order.
pub fn small_classes(curve: &Curve, coeff_bound: i64, limit: usize) -> Result<Vec<MumfordClass>> {
    check_curve(curve)?;
    let spec = curve.base();
    let mut out: Vec<MumfordClass> = Vec::new();
    let width = 2 * coeff_bound + 1;
    let total = width.pow(4);
    for code in 0..total {
        if out.len() >= limit {
            break;
        }
        let mut c = code;
        let coeffs: Vec<i64> = (0..4)
            .map(|_| {
                let v = c % width - coeff_bound;
                c /= width;
                v
            })
            .collect();
        let b = Poly::from_i64s(spec, &coeffs);
        let rest = curve.f() - &(&b * &b);
        if rest.deg() != 6 {
            continue;
        }
        let factors = match spec {
            FieldSpec::Rationals => factor_over_q(&rest)?.1,
            FieldSpec::FinitePrime(_) => factor_mod_q(&rest),
            other => {
                return Err(Error::UnsupportedBase(format!(
                    "Mumford classes over {other}"
                )))
            }
        };
        let linear: Vec<&Poly> = factors
            .iter()
            .filter(|(g, e)| g.deg() == 1 && *e == 1)
            .map(|(g, _)| g)
            .collect();
        let mut cands: Vec<Poly> = factors
            .iter()
            .filter(|(g, e)| g.deg() == 2 && *e == 1)
            .map(|(g, _)| g.clone())
            .collect();
        for i in 0..linear.len() {
            for j in i + 1..linear.len() {
                cands.push(linear[i] * linear[j]);
            }
        }
        for g in cands {
            if let Ok(m) = MumfordClass::new(curve, g, b.clone()) {
                if m.is_good() && !out.contains(&m) && !out.contains(&m.neg()) {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}
