//! The maps `(x - T)` and `(gamma y)` on good divisors and their image in
//! `Gamma`.

use crate::basefield::FieldElem;
use crate::curve::{DivisorComponent, FunctionRep, GoodDivisor};
use crate::error::{Error, Result};
use crate::etale::EtaleElem;
use crate::gamma::{GammaClass, GammaElem, Modulus};

/// `(x - T)(D)` in `L*`.
pub fn eval_x_minus_t(d: &GoodDivisor) -> EtaleElem {
    let alg = d.curve().algebra();
    let mut acc = alg.one();
    for (comp, mult) in d.terms() {
        let v = match comp {
            DivisorComponent::Horizontal { a, .. } => {
                let v = alg.elem(a.clone());
                if a.deg() % 2 == 1 {
                    -&v
                } else {
                    v
                }
            }
            DivisorComponent::Fiber { r, m } => (&alg.constant(r.clone()) - &alg.t())
                .pow(m.deg() as i64)
                .expect("fiber away from the branch points"),
        };
        acc = &acc * &v.pow(*mult).expect("good divisors map to units");
    }
    acc
}

/// `(gamma y)(D) = c^(-deg D / p) prod y(P)^(n_P)`.
pub fn eval_gamma_y(d: &GoodDivisor) -> Result<FieldElem> {
    let curve = d.curve();
    let p = curve.p() as i64;
    let deg = d.degree();
    if deg % p != 0 {
        return Err(Error::DegreeNotDivisible {
            p: curve.p(),
            degree: deg.unsigned_abs() as usize,
        });
    }
    let mut acc = curve.c().pow(-deg / p)?;
    for (comp, mult) in d.terms() {
        let v = match comp {
            DivisorComponent::Horizontal { a, b } => a.resultant(b),
            DivisorComponent::Fiber { m, .. } => {
                let v = m.coeff(0);
                if m.deg() % 2 == 1 {
                    -&v
                } else {
                    v
                }
            }
        };
        acc = &acc * &v.pow(*mult)?;
    }
    Ok(acc)
}

/// `(x - T, gamma y)(D)`; the `Gamma` membership is checked.
pub fn descent_elem(d: &GoodDivisor) -> Result<GammaElem> {
    let n = eval_gamma_y(d)?;
    GammaElem::new(eval_x_minus_t(d), n)
}

/// The class of a degree-zero divisor.
pub fn descent_class(d: &GoodDivisor, modulus: Modulus) -> Result<GammaClass> {
    if d.degree() != 0 {
        return Err(Error::NotGood(format!(
            "degree {} divisor in a class map",
            d.degree()
        )));
    }
    Ok(GammaClass::new(descent_elem(d)?, modulus))
}

/// `h(W)`: substitute `y = 0` and `x = T`.
pub fn eval_at_w(h: &FunctionRep) -> Result<EtaleElem> {
    let alg = h.curve().algebra();
    let num = alg.elem(h.num()[0].clone());
    let den = alg.elem(h.den()[0].clone());
    if !num.is_invertible() || !den.is_invertible() {
        return Err(Error::ZeroAtW);
    }
    num.checked_div(&den)
}

/// Both sides of `descent_elem(div h) = chi(h(W)) iota(h(m)^-1)`.
pub fn principal_sides(h: &FunctionRep, div_h: &GoodDivisor) -> Result<(GammaElem, GammaElem)> {
    let lhs = descent_elem(div_h)?;
    let hw = eval_at_w(h)?;
    let hm = h.eval_at_infinity()?;
    let rhs = GammaElem::chi(&hw)?.mul(&GammaElem::iota(h.curve().algebra(), &hm.inv()?)?);
    Ok((lhs, rhs))
}

pub fn verify_principal_identity(h: &FunctionRep, div_h: &GoodDivisor) -> Result<bool> {
    let (lhs, rhs) = principal_sides(h, div_h)?;
    Ok(lhs == rhs)
}
