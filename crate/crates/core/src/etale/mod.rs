//! The algebra `L = k[T]/f0(T)`: arithmetic, norms, `mu_p(L)` and p-th
//! power testing.

mod pth;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::arith::is_prime;
use crate::basefield::{FieldElem, FieldSpec};
use crate::error::{Error, Result};
use crate::poly::{factor_mod_q, factor_over_q, squarefree_mod_q, Poly, SquarefreeDecomposition};

pub(crate) use pth::ResidueCharacter;
pub use pth::{PthPower, DEFAULT_PRIME_BUDGET};

/// `L = k[T]/f0` together with the data of the curve polynomial `f`.
pub struct EtaleAlgebra {
    p: u32,
    f: Poly,
    c: FieldElem,
    c0: FieldElem,
    f0: Poly,
    radical: Poly,
    sqfree: SquarefreeDecomposition,
    factors: OnceLock<Result<Vec<Poly>>>,
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.c0 == other.c0
    }
}

impl Eq for EtaleAlgebra {}

impl fmt::Debug for EtaleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EtaleAlgebra(p = {}, f = {}, c0 = {})",
            self.p, self.f, self.c0
        )
    }
}

fn squarefree_decomposition(f: &Poly) -> Result<SquarefreeDecomposition> {
    match f.spec() {
        FieldSpec::FinitePrime(_) => {
            let parts = squarefree_mod_q(f);
            Ok(SquarefreeDecomposition {
                content: f.lc(),
                parts,
            })
        }
        _ => f.yun_squarefree(),
    }
}

impl EtaleAlgebra {
    pub fn new(p: u32, f: Poly, c0: FieldElem) -> Result<Arc<EtaleAlgebra>> {
        let spec = f.spec();
        if !is_prime(p as u64) || spec.characteristic() == p as u64 {
            return Err(Error::BadCharacteristic);
        }
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if c0.spec() != spec {
            return Err(Error::FieldMismatch(format!(
                "c0 in {} but f over {spec}",
                c0.spec()
            )));
        }
        if c0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let sqfree = squarefree_decomposition(&f)?;
        if let Some(&(_, m)) = sqfree.parts.iter().find(|(_, m)| *m >= p) {
            return Err(Error::NotPPowerFree { p, multiplicity: m });
        }
        if !f.deg().is_multiple_of(p as usize) {
            return Err(Error::DegreeNotDivisible { p, degree: f.deg() });
        }
        let radical = sqfree.radical();
        let f0 = radical.scale(&c0);
        Ok(Arc::new(EtaleAlgebra {
            p,
            c: f.lc(),
            f,
            c0,
            f0,
            radical,
            sqfree,
            factors: OnceLock::new(),
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn base(&self) -> FieldSpec {
        self.f.spec()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// Leading coefficient of `f`.
    pub fn c(&self) -> &FieldElem {
        &self.c
    }

    pub fn c0(&self) -> &FieldElem {
        &self.c0
    }

    pub fn f0(&self) -> &Poly {
        &self.f0
    }

    /// The monic radical `f0 / c0`.
    pub fn radical(&self) -> &Poly {
        &self.radical
    }

    pub fn sqfree(&self) -> &SquarefreeDecomposition {
        &self.sqfree
    }

    pub fn degf(&self) -> usize {
        self.f.deg()
    }

    /// Number of distinct roots of `f`, i.e. `dim_k L`.
    pub fn dim(&self) -> usize {
        self.radical.deg()
    }

    pub fn elem(self: &Arc<Self>, rep: Poly) -> EtaleElem {
        assert_eq!(
            rep.spec(),
            self.base(),
            "element over a different base field"
        );
        let rep = rep.rem(&self.radical);
        EtaleElem {
            alg: Arc::clone(self),
            rep,
        }
    }

    pub fn constant(self: &Arc<Self>, c: FieldElem) -> EtaleElem {
        self.elem(Poly::constant(c))
    }

    pub fn one(self: &Arc<Self>) -> EtaleElem {
        self.constant(self.base().one())
    }

    /// The generator `T`.
    pub fn t(self: &Arc<Self>) -> EtaleElem {
        self.elem(Poly::x(self.base()))
    }

    /// Monic irreducible factors of the radical over `k`, in canonical order.
    pub fn field_factors(&self) -> Result<Vec<Poly>> {
        self.factors
            .get_or_init(|| compute_field_factors(self.p, &self.radical))
            .clone()
    }

    /// CRT idempotents, one per field factor.
    pub fn idempotents(self: &Arc<Self>) -> Result<Vec<EtaleElem>> {
        let factors = self.field_factors()?;
        Ok(factors
            .iter()
            .map(|phi| {
                let cof = self.radical.exact_div(phi);
                let inv = cof.inv_mod(phi).expect("factors are coprime");
                self.elem(&cof * &inv)
            })
            .collect())
    }

    /// Combine residues modulo the field factors into one element.
    pub fn crt(self: &Arc<Self>, residues: &[Poly]) -> Result<EtaleElem> {
        let ids = self.idempotents()?;
        let mut acc = self.elem(Poly::zero(self.base()));
        for (e, r) in ids.iter().zip(residues) {
            acc = &acc + &(e * &self.elem(r.clone()));
        }
        Ok(acc)
    }

    /// All `eta` with `eta^p = 1`: the fixed `zeta` raised to independent
    /// powers on each field factor.
    pub fn mu_p_list(self: &Arc<Self>) -> Result<Vec<EtaleElem>> {
        let zeta = self.base().primitive_pth_root(self.p).map_err(|_| {
            Error::FactorizationUnavailable(format!(
                "mu_{} is not contained in the base field {}",
                self.p,
                self.base()
            ))
        })?;
        let ids = self.idempotents()?;
        let powers: Vec<FieldElem> = (0..self.p as i64).map(|i| zeta.pow(i).unwrap()).collect();
        let mut out = Vec::new();
        let total = (self.p as usize).pow(ids.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut acc = self.elem(Poly::zero(self.base()));
            for e in &ids {
                let digit = c % self.p as usize;
                c /= self.p as usize;
                acc = &acc + &(e * &self.constant(powers[digit].clone()));
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Irreducible factorization of a monic squarefree polynomial over `k`.
///
/// Over `Q(zeta_p)` only rational radicals are handled: a Q-irreducible
/// factor whose degree is prime to `p - 1` stays irreducible, and for
/// `p = 3` a quadratic factor splits exactly when its discriminant is
/// `-3` times a square.
fn compute_field_factors(p: u32, radical: &Poly) -> Result<Vec<Poly>> {
    match radical.spec() {
        FieldSpec::FinitePrime(_) => {
            Ok(factor_mod_q(radical).into_iter().map(|(g, _)| g).collect())
        }
        FieldSpec::Rationals => Ok(factor_over_q(radical)?
            .1
            .into_iter()
            .map(|(g, _)| g)
            .collect()),
        FieldSpec::Cyclotomic(r) => {
            let spec = FieldSpec::Cyclotomic(r);
            let rat = radical.map_to(FieldSpec::Rationals).map_err(|_| {
                Error::FactorizationUnavailable("radical has non-rational coefficients".into())
            })?;
            let mut out = Vec::new();
            for (phi, _) in factor_over_q(&rat)?.1 {
                let n = phi.deg();
                if num_integer::gcd(n, r as usize - 1) == 1 {
                    out.push(phi.map_to(spec)?);
                } else if r == 3 && n == 2 {
                    match split_quadratic_zeta3(&phi) {
                        Some((a, b)) => {
                            out.push(a);
                            out.push(b);
                        }
                        None => out.push(phi.map_to(spec)?),
                    }
                } else {
                    return Err(Error::FactorizationUnavailable(format!(
                        "factor of degree {n} over Q(zeta_{r}) (exponent {p})"
                    )));
                }
            }
            out.sort_by_key(|g| g.to_coeff_string());
            out.sort_by_key(Poly::deg);
            Ok(out)
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

fn split_quadratic_zeta3(phi: &Poly) -> Option<(Poly, Poly)> {
    let b = phi.coeff(1).as_rational()?;
    let c = phi.coeff(0).as_rational()?;
    let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &c;
    let s = rational_sqrt(&(disc / BigRational::from_integer(BigInt::from(-3))))?;
    let spec = FieldSpec::Cyclotomic(3);
    // sqrt(-3) = 1 + 2 zeta
    let sqrt_m3 = spec.parse_elem("1,2").unwrap();
    let half = spec
        .from_rational(&BigRational::new(1.into(), 2.into()))
        .unwrap();
    let bb = spec.from_rational(&b).unwrap();
    let ss = &spec.from_rational(&s).unwrap() * &sqrt_m3;
    let r1 = &(&(-&bb) + &ss) * &half;
    let r2 = &(&(-&bb) - &ss) * &half;
    let mut roots = [Poly::linear_root(&r1), Poly::linear_root(&r2)];
    roots.sort_by_key(|g| g.to_coeff_string());
    let [a, b] = roots;
    Some((a, b))
}

/// A residue class in `L`.
#[derive(Clone, PartialEq, Eq)]
pub struct EtaleElem {
    alg: Arc<EtaleAlgebra>,
    rep: Poly,
}

impl fmt::Debug for EtaleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaleElem({})", self)
    }
}

impl fmt::Display for EtaleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.pretty("T"))
    }
}

impl EtaleElem {
    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.alg
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// The constant value if the element lies in `k`.
    pub fn as_constant(&self) -> Option<FieldElem> {
        self.rep.is_constant().then(|| self.rep.coeff(0))
    }

    pub fn is_invertible(&self) -> bool {
        self.rep.gcd(&self.alg.radical).is_one()
    }

    pub fn inv(&self) -> Result<EtaleElem> {
        match self.rep.inv_mod(&self.alg.radical) {
            Ok(u) => Ok(EtaleElem {
                alg: Arc::clone(&self.alg),
                rep: u,
            }),
            Err(g) => Err(Error::ZeroDivisor {
                certificate: g.to_string(),
            }),
        }
    }

    pub fn pow(&self, e: i64) -> Result<EtaleElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let rep = base
            .rep
            .pow_mod(&e.unsigned_abs().into(), &self.alg.radical);
        Ok(EtaleElem {
            alg: Arc::clone(&self.alg),
            rep,
        })
    }

    pub fn checked_div(&self, other: &EtaleElem) -> Result<EtaleElem> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &FieldElem) -> EtaleElem {
        EtaleElem {
            alg: Arc::clone(&self.alg),
            rep: self.rep.scale(c),
        }
    }

    /// `N(beta) = prod_m Res(g_m, rep)^m` over the square-free parts of `f`.
    pub fn weighted_norm(&self) -> Result<FieldElem> {
        let mut acc = self.alg.base().one();
        for (g, m) in &self.alg.sqfree.parts {
            let r = g.resultant(&self.rep);
            if r.is_zero() {
                return Err(Error::NotInvertible);
            }
            acc = &acc * &r.pow(*m as i64).unwrap();
        }
        Ok(acc)
    }

    /// Plain algebra norm `Res(radical, rep)`.
    pub fn norm(&self) -> FieldElem {
        if self.rep.is_zero() {
            return self.alg.base().zero();
        }
        self.alg.radical.resultant(&self.rep)
    }

    /// Sum of `beta` over the roots of the radical, by Newton's identities.
    pub fn trace(&self) -> FieldElem {
        let g = &self.alg.radical;
        let d = g.deg();
        let spec = g.spec();
        let n = self.rep.coeffs().len();
        let mut s: Vec<FieldElem> = vec![spec.from_i64(d as i64)];
        for k in 1..n.max(1) {
            let mut acc = if k <= d {
                -&(&spec.from_i64(k as i64) * &g.coeff(d - k))
            } else {
                spec.zero()
            };
            for i in 1..k.min(d + 1) {
                acc = &acc - &(&g.coeff(d - i) * &s[k - i]);
            }
            s.push(acc);
        }
        self.rep
            .coeffs()
            .iter()
            .zip(&s)
            .fold(spec.zero(), |acc, (b, sk)| &acc + &(b * sk))
    }

    /// Residue modulo a factor of the radical.
    pub fn reduce_mod(&self, phi: &Poly) -> Poly {
        self.rep.rem(phi)
    }

    /// Decide whether `self` is a p-th power in `L`.
    pub fn pth_power_test(&self, prime_budget: usize, seed: u64) -> Result<PthPower> {
        pth::pth_power_test(self, prime_budget, seed)
    }
}

impl Add for &EtaleElem {
    type Output = EtaleElem;
    fn add(self, rhs: &EtaleElem) -> EtaleElem {
        EtaleElem {
            alg: Arc::clone(&self.alg),
            rep: &self.rep + &rhs.rep,
        }
    }
}

impl Sub for &EtaleElem {
    type Output = EtaleElem;
    fn sub(self, rhs: &EtaleElem) -> EtaleElem {
        EtaleElem {
            alg: Arc::clone(&self.alg),
            rep: &self.rep - &rhs.rep,
        }
    }
}

impl Mul for &EtaleElem {
    type Output = EtaleElem;
    fn mul(self, rhs: &EtaleElem) -> EtaleElem {
        EtaleElem {
            alg: Arc::clone(&self.alg),
            rep: self.rep.mul_mod(&rhs.rep, &self.alg.radical),
        }
    }
}

impl Neg for &EtaleElem {
    type Output = EtaleElem;
    fn neg(self) -> EtaleElem {
        EtaleElem {
            alg: Arc::clone(&self.alg),
            rep: -&self.rep,
        }
    }
}

#[cfg(test)]
mod tests;
