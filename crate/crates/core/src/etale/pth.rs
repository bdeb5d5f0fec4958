//! Deciding membership in `L*^p`.
//!
//! Over `F_q` the test is exact: a p-th root is extracted on each field
//! factor. Over Q we first run residue tests at good primes, which give
//! sound negative certificates, and then lift roots modulo `q^k` with
//! Newton iteration and rational reconstruction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EtaleElem;
use crate::arith::{inv_mod_big, primes_from};
use crate::basefield::{rational_reconstruct, FieldElem, FieldSpec};
use crate::error::{Error, Result};
use crate::poly::zmod::{self, ZPoly};
use crate::poly::{factor_mod_q, Poly};

pub const DEFAULT_PRIME_BUDGET: usize = 20;

/// Largest number of residue root combinations tried per field factor.
const COMBINATION_CAP: usize = 729;

/// Outcome of the p-th power test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PthPower {
    /// A verified root `theta` with `theta^p = delta`.
    Root(EtaleElem),
    /// A good prime at which `delta` is not a p-th power.
    NonResidue(u64),
    Inconclusive,
}

/// The finite field `F_q[x]/(psi)`.
pub(crate) struct FqExt {
    q: u64,
    modulus: Poly,
    order: BigUint,
}

impl FqExt {
    pub(crate) fn new(modulus: Poly) -> FqExt {
        let q = modulus.spec().characteristic();
        let order = BigUint::from(q).pow(modulus.deg() as u32);
        FqExt { q, modulus, order }
    }

    fn one(&self) -> Poly {
        Poly::one(self.modulus.spec())
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_mod(b, &self.modulus)
    }

    fn pow(&self, a: &Poly, e: &BigUint) -> Poly {
        a.pow_mod(e, &self.modulus)
    }

    fn inv(&self, a: &Poly) -> Poly {
        a.inv_mod(&self.modulus)
            .expect("nonzero element of a field")
    }

    fn random_nonzero(&self, rng: &mut ChaCha8Rng) -> Poly {
        loop {
            let coeffs = (0..self.modulus.deg())
                .map(|_| FieldElem::Residue {
                    q: self.q,
                    v: rng.gen_range(0..self.q),
                })
                .collect();
            let a = Poly::new(self.modulus.spec(), coeffs);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Discrete logarithm of `h` to base `g`, where `g` has order `p^s`.
    fn dlog_p_group(&self, g: &Poly, h: &Poly, p: u32, s: u32) -> BigUint {
        let pb = BigUint::from(p);
        let gamma = self.pow(g, &pb.pow(s - 1));
        let mut table = vec![self.one()];
        for _ in 1..p {
            let next = self.mul(table.last().unwrap(), &gamma);
            table.push(next);
        }
        let mut e = BigUint::zero();
        let mut pk = BigUint::one();
        for k in 0..s {
            let shifted = self.mul(&self.inv(&self.pow(g, &e)), h);
            let hk = self.pow(&shifted, &pb.pow(s - 1 - k));
            let digit = table
                .iter()
                .position(|t| *t == hk)
                .expect("element of the p-group");
            e += &pk * BigUint::from(digit);
            pk *= &pb;
        }
        e
    }

    /// All `x` with `x^p = a` (a nonzero).
    pub(crate) fn pth_roots(&self, a: &Poly, p: u32, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let pb = BigUint::from(p);
        let qm1 = &self.order - BigUint::one();
        if !(&qm1 % &pb).is_zero() {
            let e = inv_mod_big(&BigInt::from(p), &BigInt::from(qm1.clone())).unwrap();
            return vec![self.pow(a, &e.to_biguint().unwrap())];
        }
        if !self.pow(a, &(&qm1 / &pb)).is_one() {
            return Vec::new();
        }
        let mut s = 0u32;
        let mut t = qm1.clone();
        while (&t % &pb).is_zero() {
            t /= &pb;
            s += 1;
        }
        let z = loop {
            let z = self.random_nonzero(rng);
            if !self.pow(&z, &(&qm1 / &pb)).is_one() {
                break z;
            }
        };
        let g = self.pow(&z, &t);
        let k = if t.is_one() {
            BigUint::zero()
        } else {
            inv_mod_big(&BigInt::from(p), &BigInt::from(t.clone()))
                .unwrap()
                .to_biguint()
                .unwrap()
        };
        let x0 = self.pow(a, &k);
        let err = self.mul(&self.pow(&x0, &pb), &self.inv(a));
        let e = self.dlog_p_group(&g, &self.inv(&err), p, s);
        debug_assert!((&e % &pb).is_zero());
        let x = self.mul(&x0, &self.pow(&g, &(e / &pb)));
        debug_assert_eq!(self.pow(&x, &pb), a.rem(&self.modulus));
        let zeta = self.pow(&g, &pb.pow(s - 1));
        let mut roots = vec![x];
        for _ in 1..p {
            let next = self.mul(roots.last().unwrap(), &zeta);
            roots.push(next);
        }
        roots
    }
}

pub(crate) fn pth_power_test(delta: &EtaleElem, budget: usize, seed: u64) -> Result<PthPower> {
    if !delta.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let alg = delta.algebra();
    if delta.is_one() {
        return Ok(PthPower::Root(alg.one()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match alg.base() {
        FieldSpec::FinitePrime(q) => {
            let mut picked = Vec::new();
            for phi in alg.field_factors()? {
                let ext = FqExt::new(phi.clone());
                let roots = ext.pth_roots(&delta.reduce_mod(&phi), alg.p(), &mut rng);
                match roots.into_iter().next() {
                    Some(r) => picked.push(r),
                    None => return Ok(PthPower::NonResidue(q)),
                }
            }
            let theta = alg.crt(&picked)?;
            debug_assert_eq!(theta.pow(alg.p() as i64)?, *delta);
            Ok(PthPower::Root(theta))
        }
        FieldSpec::Rationals => rational_case(delta, budget, &mut rng),
        other => Err(Error::UnsupportedBase(format!(
            "p-th power test over {other}"
        ))),
    }
}

fn denominator_lcm(polys: &[&Poly]) -> BigInt {
    let mut acc = BigInt::one();
    for f in polys {
        for c in f.coeffs() {
            acc = acc.lcm(c.as_rational().unwrap().denom());
        }
    }
    acc
}

fn rat_image(c: &BigRational, m: &BigInt) -> BigInt {
    let inv = inv_mod_big(c.denom(), m).expect("denominator prime to the modulus");
    (c.numer() * inv).mod_floor(m)
}

fn poly_image(f: &Poly, m: &BigInt) -> ZPoly {
    zmod::trim(
        f.coeffs()
            .iter()
            .map(|c| rat_image(&c.as_rational().unwrap(), m))
            .collect(),
    )
}

fn mulmod(a: &[BigInt], b: &[BigInt], phi: &[BigInt], m: &BigInt) -> ZPoly {
    zmod::divmod(&zmod::mul(a, b, m), phi, m).1
}

fn powmod(a: &[BigInt], e: u32, phi: &[BigInt], m: &BigInt) -> ZPoly {
    let mut acc = zmod::one();
    for _ in 0..e {
        acc = mulmod(&acc, a, phi, m);
    }
    acc
}

fn rational_case(delta: &EtaleElem, budget: usize, rng: &mut ChaCha8Rng) -> Result<PthPower> {
    let alg = delta.algebra();
    let p = alg.p();
    let radical = alg.radical();
    let den = denominator_lcm(&[delta.rep(), radical]);
    let mut good = Vec::new();
    for q in primes_from(2) {
        if good.len() >= budget {
            break;
        }
        if q == p as u64 || (&den % BigInt::from(q)).is_zero() {
            continue;
        }
        let fq = FieldSpec::FinitePrime(q);
        let rq = radical.map_to(fq)?;
        if !rq.is_squarefree() {
            continue;
        }
        let dq = delta.rep().map_to(fq)?;
        if !dq.gcd(&rq).is_one() {
            continue;
        }
        for (psi, _) in factor_mod_q(&rq) {
            let ext = FqExt::new(psi.clone());
            if ext.pth_roots(&dq.rem(&psi), p, rng).is_empty() {
                return Ok(PthPower::NonResidue(q));
            }
        }
        good.push(q);
    }
    let mut parts = Vec::new();
    for phi in alg.field_factors()? {
        let delta_j = delta.reduce_mod(&phi);
        match lift_root_on_factor(&phi, &delta_j, p, &good, rng) {
            Some(theta_j) => parts.push(theta_j),
            None => return Ok(PthPower::Inconclusive),
        }
    }
    let theta = alg.crt(&parts)?;
    if theta.pow(p as i64)? == *delta {
        Ok(PthPower::Root(theta))
    } else {
        Ok(PthPower::Inconclusive)
    }
}

/// Find `theta` in `Q[x]/phi` with `theta^p = delta` by lifting residue roots.
fn lift_root_on_factor(
    phi: &Poly,
    delta: &Poly,
    p: u32,
    good: &[u64],
    rng: &mut ChaCha8Rng,
) -> Option<Poly> {
    // Prefer primes where phi has few factors: fewer root combinations.
    let mut candidates: Vec<(usize, u64, Vec<Poly>)> = good
        .iter()
        .map(|&q| {
            let fq = FieldSpec::FinitePrime(q);
            let facs: Vec<Poly> = factor_mod_q(&phi.map_to(fq).unwrap())
                .into_iter()
                .map(|(h, _)| h)
                .collect();
            (facs.len(), q, facs)
        })
        .collect();
    candidates.sort_by_key(|c| (c.0, c.1));
    for (_, q, facs) in candidates.into_iter().take(3) {
        let fq = FieldSpec::FinitePrime(q);
        let phi_q = phi.map_to(fq).unwrap();
        let dq = delta.map_to(fq).unwrap();
        let mut root_sets = Vec::new();
        for psi in &facs {
            let ext = FqExt::new(psi.clone());
            let roots = ext.pth_roots(&dq.rem(psi), p, rng);
            if roots.is_empty() {
                return None;
            }
            root_sets.push(roots);
        }
        let total: usize = root_sets.iter().map(Vec::len).product();
        if total > COMBINATION_CAP {
            continue;
        }
        let idems: Vec<Poly> = facs
            .iter()
            .map(|psi| {
                let cof = phi_q.exact_div(psi);
                (&cof * &cof.inv_mod(psi).unwrap()).rem(&phi_q)
            })
            .collect();
        for code in 0..total {
            let mut c = code;
            let mut theta0 = Poly::zero(fq);
            for (set, e) in root_sets.iter().zip(&idems) {
                let r = &set[c % set.len()];
                c /= set.len();
                theta0 = &theta0 + &e.mul_mod(r, &phi_q);
            }
            if let Some(root) = newton_lift(phi, delta, p, q, &theta0.rem(&phi_q)) {
                return Some(root);
            }
        }
    }
    None
}

fn newton_lift(phi: &Poly, delta: &Poly, p: u32, q: u64, theta0: &Poly) -> Option<Poly> {
    let fq = theta0.spec();
    let phi_q = phi.map_to(fq).unwrap();
    let pe = fq.from_i64(p as i64);
    let deriv = theta0.pow_mod(&BigUint::from(p - 1), &phi_q).scale(&pe);
    let v0 = deriv.inv_mod(&phi_q).ok()?;
    let to_z = |f: &Poly| -> ZPoly {
        zmod::trim(
            f.coeffs()
                .iter()
                .map(|c| BigInt::from(c.as_residue().unwrap()))
                .collect(),
        )
    };
    let mut theta = to_z(theta0);
    let mut v = to_z(&v0);
    let mut m = BigInt::from(q);
    let limit = BigInt::from(10u32).pow(40);
    let two = BigInt::from(2);
    let pb = BigInt::from(p);
    loop {
        m = &m * &m;
        let phi_m = poly_image(phi, &m);
        let delta_m = poly_image(delta, &m);
        let err = zmod::sub(&powmod(&theta, p, &phi_m, &m), &delta_m, &m);
        theta = zmod::sub(&theta, &mulmod(&v, &err, &phi_m, &m), &m);
        let dth = zmod::scale(&powmod(&theta, p - 1, &phi_m, &m), &pb, &m);
        let corr = zmod::sub(
            std::slice::from_ref(&two),
            &mulmod(&dth, &v, &phi_m, &m),
            &m,
        );
        v = mulmod(&v, &corr, &phi_m, &m);
        if let Some(cand) = reconstruct(&theta, &m) {
            let cand = Poly::new(
                FieldSpec::Rationals,
                cand.into_iter().map(FieldElem::Rational).collect(),
            );
            if cand.pow_mod(&BigUint::from(p), phi) == delta.rem(phi) {
                return Some(cand);
            }
        }
        if (&m / &two).sqrt() > limit {
            return None;
        }
    }
}

fn reconstruct(v: &[BigInt], m: &BigInt) -> Option<Vec<BigRational>> {
    v.iter().map(|c| rational_reconstruct(c, m)).collect()
}

/// The p-th power residue character of a finite field `F_q[x]/(psi)`,
/// with values as exponents of a fixed generator of `mu_p`.
pub(crate) struct ResidueCharacter {
    ext: FqExt,
    exp: BigUint,
    table: Vec<Poly>,
}

impl ResidueCharacter {
    /// `None` when `p` does not divide the multiplicative group order.
    pub(crate) fn new(psi: Poly, p: u32, rng: &mut ChaCha8Rng) -> Option<ResidueCharacter> {
        let ext = FqExt::new(psi);
        let pb = BigUint::from(p);
        let qm1 = &ext.order - BigUint::one();
        if !(&qm1 % &pb).is_zero() {
            return None;
        }
        let exp = &qm1 / &pb;
        let zeta = loop {
            let z = ext.pow(&ext.random_nonzero(rng), &exp);
            if !z.is_one() {
                break z;
            }
        };
        let mut table = vec![ext.one()];
        for _ in 1..p {
            let next = ext.mul(table.last().unwrap(), &zeta);
            table.push(next);
        }
        Some(ResidueCharacter { ext, exp, table })
    }

    pub(crate) fn modulus(&self) -> &Poly {
        &self.ext.modulus
    }

    /// Index `i` with `a^((Q-1)/p) = zeta^i`; `a` must be reduced and nonzero.
    pub(crate) fn eval(&self, a: &Poly) -> usize {
        let v = self.ext.pow(a, &self.exp);
        self.table
            .iter()
            .position(|t| *t == v)
            .expect("value is a p-th root of unity")
    }
}
