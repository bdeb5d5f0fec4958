//! The group `Gamma = {(delta, n) : N(delta) = n^p}`, the maps `chi` and
//! `iota`, and class tests modulo `chi(L*)` and `chi(L*) iota(k*)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{is_prime, pow_mod, prime_factors, primes_from};
use crate::basefield::{FieldElem, FieldSpec};
use crate::error::{Error, Result};
use crate::etale::{EtaleAlgebra, EtaleElem, PthPower, ResidueCharacter};
use crate::poly::{factor_mod_q, Poly};

/// An element `(delta, n)` of `Gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElem {
    delta: EtaleElem,
    n: FieldElem,
}

impl GammaElem {
    pub fn new(delta: EtaleElem, n: FieldElem) -> Result<GammaElem> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !delta.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let norm = delta.weighted_norm()?;
        let power = n.pow(delta.algebra().p() as i64)?;
        if norm != power {
            return Err(Error::NotInGamma {
                norm: norm.to_string(),
                power: power.to_string(),
            });
        }
        Ok(GammaElem { delta, n })
    }

    pub fn identity(alg: &Arc<EtaleAlgebra>) -> GammaElem {
        GammaElem {
            delta: alg.one(),
            n: alg.base().one(),
        }
    }

    /// `chi(theta) = (theta^p, N(theta))`.
    pub fn chi(theta: &EtaleElem) -> Result<GammaElem> {
        let n = theta.weighted_norm()?;
        let delta = theta.pow(theta.algebra().p() as i64)?;
        Ok(GammaElem { delta, n })
    }

    /// `iota(x) = (x, x^(deg f / p))`.
    pub fn iota(alg: &Arc<EtaleAlgebra>, x: &FieldElem) -> Result<GammaElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = (alg.degf() / alg.p() as usize) as i64;
        Ok(GammaElem {
            delta: alg.constant(x.clone()),
            n: x.pow(e)?,
        })
    }

    pub fn delta(&self) -> &EtaleElem {
        &self.delta
    }

    pub fn n(&self) -> &FieldElem {
        &self.n
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        self.delta.algebra()
    }

    pub fn is_identity(&self) -> bool {
        self.delta.is_one() && self.n.is_one()
    }

    /// `N(delta) n^(-p)`, equal to 1 on `Gamma`.
    pub fn boundary(&self) -> FieldElem {
        let norm = self.delta.weighted_norm().expect("delta is invertible");
        &norm * &self.n.pow(-(self.algebra().p() as i64)).unwrap()
    }

    pub fn mul(&self, other: &GammaElem) -> GammaElem {
        GammaElem {
            delta: &self.delta * &other.delta,
            n: &self.n * &other.n,
        }
    }

    pub fn inv(&self) -> GammaElem {
        GammaElem {
            delta: self.delta.inv().expect("delta is invertible"),
            n: self.n.inv().expect("n is nonzero"),
        }
    }

    pub fn pow(&self, e: i64) -> GammaElem {
        GammaElem {
            delta: self.delta.pow(e).expect("delta is invertible"),
            n: self.n.pow(e).expect("n is nonzero"),
        }
    }

    /// Parse `delta = <poly> ; n = <literal>`.
    pub fn parse(alg: &Arc<EtaleAlgebra>, s: &str) -> Result<GammaElem> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("expected 'delta = <poly> ; n = <literal>', got '{s}'"),
        };
        let (d, n) = s.split_once(';').ok_or_else(bad)?;
        let d = d.trim().strip_prefix("delta").ok_or_else(bad)?.trim();
        let n = n.trim().strip_prefix('n').ok_or_else(bad)?.trim();
        let d = d.strip_prefix('=').ok_or_else(bad)?;
        let n = n.strip_prefix('=').ok_or_else(bad)?;
        let delta = alg.elem(Poly::parse(alg.base(), d)?);
        GammaElem::new(delta, alg.base().parse_elem(n.trim())?)
    }
}

impl fmt::Display for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta = {} ; n = {}",
            self.delta.rep().to_coeff_string(),
            self.n
        )
    }
}

/// Which subgroup a class is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    /// `Gamma / chi(L*)`
    ChiOnly,
    /// `Gamma / chi(L*) iota(k*)`
    ChiIota,
}

/// Why a candidate constant `c` was ruled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `delta / c` is not a p-th power modulo this prime.
    NonResidue { c: FieldElem, prime: u64 },
    /// `delta / c` is a p-th power but no root matches the `n` component.
    NormMismatch { c: FieldElem },
    /// This many candidates have p-th power residue symbols at these primes
    /// that differ from those of `delta`.
    CharacterSystem { primes: Vec<u64>, excluded: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NonResidue { c, prime } => write!(f, "c = {c}: non-residue mod {prime}"),
            Rejection::NormMismatch { c } => {
                write!(f, "c = {c}: no root matches n up to N(mu_p(L))")
            }
            Rejection::CharacterSystem { primes, excluded } => {
                write!(
                    f,
                    "{excluded} candidates excluded by residue symbols at {primes:?}"
                )
            }
        }
    }
}

/// Verdict of a subgroup membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Certificate `g = chi(theta) iota(c)`.
    Yes {
        theta: EtaleElem,
        c: FieldElem,
    },
    No(Vec<Rejection>),
    Inconclusive,
}

/// Verdict of a class comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassVerdict {
    /// `a b^{-1} = chi(theta) iota(c)`.
    Equal {
        theta: EtaleElem,
        c: FieldElem,
    },
    Distinct(Vec<Rejection>),
    Inconclusive,
}

fn rational_primes(r: &BigRational, out: &mut Vec<BigUint>) {
    out.extend(prime_factors(r.numer()));
    out.extend(prime_factors(r.denom()));
}

fn coefficient_primes(f: &Poly, out: &mut Vec<BigUint>, numerators: bool) {
    for c in f.coeffs() {
        let r = c.as_rational().expect("rational coefficient");
        out.extend(prime_factors(r.denom()));
        if numerators {
            out.extend(prime_factors(r.numer()));
        }
    }
}

fn base_support(delta: &EtaleElem) -> Vec<BigUint> {
    let alg = delta.algebra();
    let mut out = vec![BigUint::from(alg.p())];
    rational_primes(&alg.c().as_rational().unwrap(), &mut out);
    rational_primes(
        &alg.radical().discriminant_monic().as_rational().unwrap(),
        &mut out,
    );
    coefficient_primes(alg.radical(), &mut out, false);
    coefficient_primes(delta.rep(), &mut out, false);
    out
}

fn finish(mut out: Vec<BigUint>) -> Vec<BigUint> {
    out.sort();
    out.dedup();
    out
}

/// Primes outside of which `delta` is a unit at every place of an
/// unramified `L`: `p`, `lc(f)`, `disc(f0)`, denominators of `f0` and
/// `delta`, and the primes of `n`.
///
/// Away from the denominators `delta` is integral, so it is a unit exactly
/// when its weighted norm `n^p` is.
pub fn mandatory_support(g: &GammaElem) -> Vec<BigUint> {
    if g.algebra().base() != FieldSpec::Rationals {
        return Vec::new();
    }
    let mut out = base_support(g.delta());
    rational_primes(&g.n().as_rational().unwrap(), &mut out);
    finish(out)
}

/// As [`mandatory_support`] with the algebra norm of `delta` in place of `n`.
pub fn delta_support(delta: &EtaleElem) -> Vec<BigUint> {
    if delta.algebra().base() != FieldSpec::Rationals {
        return Vec::new();
    }
    let mut out = base_support(delta);
    rational_primes(&delta.norm().as_rational().unwrap(), &mut out);
    finish(out)
}

/// Representatives of `k*/k*^p` generators: `-1` (for `p = 2`) and the
/// primes of `S` over Q, a non-residue over `F_q`.
fn constant_generators(alg: &EtaleAlgebra, support: &[BigUint]) -> Result<Vec<FieldElem>> {
    let p = alg.p();
    match alg.base() {
        FieldSpec::Rationals => {
            let mut gens = Vec::new();
            if p == 2 {
                gens.push(FieldElem::Rational(BigRational::from_integer(
                    BigInt::from(-1),
                )));
            }
            for l in support {
                gens.push(FieldElem::Rational(BigRational::from_integer(
                    BigInt::from(l.clone()),
                )));
            }
            Ok(gens)
        }
        FieldSpec::FinitePrime(q) => {
            if (q - 1) % p as u64 != 0 {
                return Ok(Vec::new());
            }
            let g = (2..q)
                .find(|&v| pow_mod(v, (q - 1) / p as u64, q) != 1)
                .expect("a non-residue exists");
            Ok(vec![FieldElem::Residue { q, v: g }])
        }
        other => Err(Error::UnsupportedBase(format!("class tests over {other}"))),
    }
}

/// Residue characters at good primes, for ruling out candidates cheaply.
struct CharacterTable {
    primes: Vec<u64>,
    chars: Vec<(usize, ResidueCharacter)>,
}

impl CharacterTable {
    fn build(delta: &EtaleElem, support: &[BigUint], budget: usize, seed: u64) -> CharacterTable {
        let alg = delta.algebra();
        let p = alg.p();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc4a2);
        let mut primes = Vec::new();
        let mut chars = Vec::new();
        let mut den = BigInt::one();
        for c in alg.radical().coeffs().iter().chain(delta.rep().coeffs()) {
            den = num_integer::Integer::lcm(&den, c.as_rational().unwrap().denom());
        }
        for q in primes_from(2) {
            if primes.len() >= budget {
                break;
            }
            if q == p as u64
                || support.contains(&BigUint::from(q))
                || (&den % BigInt::from(q)) == BigInt::from(0)
            {
                continue;
            }
            let fq = FieldSpec::FinitePrime(q);
            let rq = alg.radical().map_to(fq).unwrap();
            if !rq.is_squarefree() {
                continue;
            }
            let dq = delta.rep().map_to(fq).unwrap();
            if !dq.gcd(&rq).is_one() {
                continue;
            }
            let idx = primes.len();
            primes.push(q);
            for (psi, _) in factor_mod_q(&rq) {
                if let Some(ch) = ResidueCharacter::new(psi, p, &mut rng) {
                    chars.push((idx, ch));
                }
            }
        }
        CharacterTable { primes, chars }
    }

    fn values(&self, x: &Poly) -> Vec<usize> {
        self.chars
            .iter()
            .map(|(i, ch)| {
                let fq = FieldSpec::FinitePrime(self.primes[*i]);
                ch.eval(&x.map_to(fq).unwrap().rem(ch.modulus()))
            })
            .collect()
    }
}

/// Solutions `e` in `(Z/p)^n` of `sum_i e_i rows[j][i] = rhs[j]` for all `j`,
/// in increasing order of `sum e_i p^i`. `None` if the system is inconsistent.
fn solve_mod_p(
    rows: &[Vec<usize>],
    rhs: &[usize],
    n: usize,
    p: usize,
    cap: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let inv = |a: usize| (1..p).find(|b| a * b % p == 1).unwrap();
    let mut m: Vec<Vec<usize>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &v)| r.iter().copied().chain([v]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let s = inv(m[row][col]);
        for v in m[row].iter_mut() {
            *v = *v * s % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let k = m[r][col];
                for c in 0..=n {
                    m[r][c] = (m[r][c] + (p - k) * m[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| r[n] != 0) {
        return Ok(None);
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let count = p
        .checked_pow(free.len() as u32)
        .filter(|&t| t <= cap)
        .ok_or_else(|| {
            Error::TooLarge(format!("{} undetermined constant generators", free.len()))
        })?;
    let mut out = Vec::with_capacity(count);
    for code in 0..count {
        let mut e = vec![0usize; n];
        let mut k = code;
        for &f in &free {
            e[f] = k % p;
            k /= p;
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let dep: usize = free.iter().map(|&f| m[r][f] * e[f]).sum();
            e[pc] = (m[r][n] + p * p * n - dep) % p;
        }
        out.push(e);
    }
    let key = |e: &Vec<usize>| {
        e.iter()
            .rev()
            .fold(0u128, |acc, &v| acc * p as u128 + v as u128)
    };
    out.sort_by_key(key);
    Ok(Some(out))
}

/// Search for `c` in the subgroup generated by `gens` modulo p-th powers
/// with `delta / c` a p-th power, then apply `accept` to the root.
fn search<F>(
    delta: &EtaleElem,
    gens: &[FieldElem],
    support: &[BigUint],
    budget: usize,
    seed: u64,
    mut accept: F,
) -> Result<Membership>
where
    F: FnMut(&EtaleElem, &FieldElem) -> Result<Option<EtaleElem>>,
{
    const CAP: usize = 1 << 16;
    let alg = delta.algebra();
    let p = alg.p() as usize;
    let base = alg.base();
    let mut rejections = Vec::new();
    let candidates = if base == FieldSpec::Rationals && !gens.is_empty() {
        let t = CharacterTable::build(delta, support, budget, seed);
        let target = t.values(delta.rep());
        let cols: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| t.values(&Poly::constant(g.clone())))
            .collect();
        let rows: Vec<Vec<usize>> = (0..target.len())
            .map(|j| cols.iter().map(|c| c[j]).collect())
            .collect();
        match solve_mod_p(&rows, &target, gens.len(), p, CAP)? {
            Some(sols) => {
                let excluded = p.pow(gens.len() as u32).saturating_sub(sols.len());
                if excluded > 0 {
                    rejections.push(Rejection::CharacterSystem {
                        primes: t.primes.clone(),
                        excluded,
                    });
                }
                sols
            }
            None => {
                return Ok(Membership::No(vec![Rejection::CharacterSystem {
                    primes: t.primes.clone(),
                    excluded: p.pow(gens.len() as u32),
                }]))
            }
        }
    } else {
        solve_mod_p(&[], &[], gens.len(), p, CAP)?.unwrap()
    };
    let mut inconclusive = false;
    for e in candidates {
        let mut c = base.one();
        for (g, &k) in gens.iter().zip(&e) {
            if k > 0 {
                c = &c * &g.pow(k as i64)?;
            }
        }
        let quotient = delta.scale(&c.inv()?);
        match quotient.pth_power_test(budget, seed)? {
            PthPower::Root(theta) => match accept(&theta, &c)? {
                Some(theta) => return Ok(Membership::Yes { theta, c }),
                None => rejections.push(Rejection::NormMismatch { c }),
            },
            PthPower::NonResidue(prime) => rejections.push(Rejection::NonResidue { c, prime }),
            PthPower::Inconclusive => inconclusive = true,
        }
    }
    if inconclusive {
        Ok(Membership::Inconclusive)
    } else {
        Ok(Membership::No(rejections))
    }
}

/// Test whether `g` lies in `chi(L*)` (`ChiOnly`) or `chi(L*) iota(k*)`.
pub fn in_subgroup(
    g: &GammaElem,
    modulus: Modulus,
    support: &[BigUint],
    budget: usize,
    seed: u64,
) -> Result<Membership> {
    let alg = Arc::clone(g.algebra());
    if alg.base().characteristic() == 0 && alg.base() != FieldSpec::Rationals {
        return Err(Error::UnsupportedBase(format!(
            "class tests over {}",
            alg.base()
        )));
    }
    let gens = match modulus {
        Modulus::ChiOnly => Vec::new(),
        Modulus::ChiIota => constant_generators(&alg, support)?,
    };
    let mu = alg.mu_p_list()?;
    let mu_norms: Vec<FieldElem> = mu
        .iter()
        .map(|eta| eta.weighted_norm())
        .collect::<Result<_>>()?;
    let e = (alg.degf() / alg.p() as usize) as i64;
    let verdict = search(g.delta(), &gens, support, budget, seed, |theta, c| {
        let scale = &theta.weighted_norm()? * &c.pow(e)?;
        let ratio = g.n().checked_div(&scale)?;
        Ok(mu_norms
            .iter()
            .position(|nm| *nm == ratio)
            .map(|i| theta * &mu[i]))
    })?;
    if let Membership::Yes { theta, c } = &verdict {
        let check = GammaElem::chi(theta)?.mul(&GammaElem::iota(&alg, c)?);
        assert_eq!(&check, g, "membership certificate failed verification");
    }
    Ok(verdict)
}

/// A class of `Gamma` modulo the chosen subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaClass {
    rep: GammaElem,
    modulus: Modulus,
    support: Vec<BigUint>,
}

impl GammaClass {
    pub fn new(rep: GammaElem, modulus: Modulus) -> GammaClass {
        let support = mandatory_support(&rep);
        GammaClass {
            rep,
            modulus,
            support,
        }
    }

    /// Add primes to the support used for equality tests.
    pub fn with_support(mut self, extra: &[BigUint]) -> GammaClass {
        self.support
            .extend(extra.iter().filter(|l| is_prime_big(l)).cloned());
        self.support.sort();
        self.support.dedup();
        self
    }

    pub fn rep(&self) -> &GammaElem {
        &self.rep
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn support(&self) -> &[BigUint] {
        &self.support
    }

    /// Outside the union of both supports each factor is a unit, hence so
    /// is the product.
    pub fn mul(&self, other: &GammaClass) -> GammaClass {
        self.combine(self.rep.mul(&other.rep), other)
    }

    fn combine(&self, rep: GammaElem, other: &GammaClass) -> GammaClass {
        let mut support: Vec<BigUint> =
            self.support.iter().chain(&other.support).cloned().collect();
        support.sort();
        support.dedup();
        GammaClass {
            rep,
            modulus: self.modulus,
            support,
        }
    }

    pub fn is_trivial(&self, budget: usize, seed: u64) -> Result<Membership> {
        in_subgroup(&self.rep, self.modulus, &self.support, budget, seed)
    }

    pub fn class_eq(&self, other: &GammaClass, budget: usize, seed: u64) -> Result<ClassVerdict> {
        if self.modulus != other.modulus || self.rep.algebra() != other.rep.algebra() {
            return Err(Error::ModulusMismatch);
        }
        if self.rep == other.rep {
            let alg = self.rep.algebra();
            return Ok(ClassVerdict::Equal {
                theta: alg.one(),
                c: alg.base().one(),
            });
        }
        let quotient = self.combine(self.rep.mul(&other.rep.inv()), other);
        Ok(match quotient.is_trivial(budget, seed)? {
            Membership::Yes { theta, c } => ClassVerdict::Equal { theta, c },
            Membership::No(r) => ClassVerdict::Distinct(r),
            Membership::Inconclusive => ClassVerdict::Inconclusive,
        })
    }
}

fn is_prime_big(l: &BigUint) -> bool {
    match u64::try_from(l) {
        Ok(v) => is_prime(v),
        Err(_) => true,
    }
}

/// Class of `delta` in `L*/L*^p k*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FakeClass {
    delta: EtaleElem,
}

/// Verdict of a fake-class triviality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FakeVerdict {
    /// `delta = c theta^p`.
    Trivial {
        theta: EtaleElem,
        c: FieldElem,
    },
    Nontrivial(Vec<Rejection>),
    Inconclusive,
}

/// Forget `n`: the projection `Gamma -> L*/L*^p k*`.
pub fn project_fake(g: &GammaElem) -> FakeClass {
    FakeClass {
        delta: g.delta().clone(),
    }
}

impl FakeClass {
    pub fn delta(&self) -> &EtaleElem {
        &self.delta
    }

    pub fn mul(&self, other: &FakeClass) -> FakeClass {
        FakeClass {
            delta: &self.delta * &other.delta,
        }
    }

    pub fn is_trivial(
        &self,
        extra_support: &[BigUint],
        budget: usize,
        seed: u64,
    ) -> Result<FakeVerdict> {
        let alg = Arc::clone(self.delta.algebra());
        let mut support = delta_support(&self.delta);
        support.extend(extra_support.iter().cloned());
        support.sort();
        support.dedup();
        let gens = constant_generators(&alg, &support)?;
        let verdict = search(&self.delta, &gens, &support, budget, seed, |theta, _| {
            Ok(Some(theta.clone()))
        })?;
        Ok(match verdict {
            Membership::Yes { theta, c } => {
                assert_eq!(theta.pow(alg.p() as i64)?.scale(&c), self.delta);
                FakeVerdict::Trivial { theta, c }
            }
            Membership::No(r) => FakeVerdict::Nontrivial(r),
            Membership::Inconclusive => FakeVerdict::Inconclusive,
        })
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Yes { theta, c } => write!(f, "trivial (theta = {theta}, c = {c})"),
            Membership::No(r) => write!(f, "nontrivial ({} candidates ruled out)", r.len()),
            Membership::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

impl fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassVerdict::Equal { theta, c } => write!(f, "Equal (theta = {theta}, c = {c})"),
            ClassVerdict::Distinct(r) => write!(f, "Distinct ({} candidates ruled out)", r.len()),
            ClassVerdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

impl fmt::Display for FakeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FakeVerdict::Trivial { theta, c } => write!(f, "trivial (theta = {theta}, c = {c})"),
            FakeVerdict::Nontrivial(r) => {
                write!(f, "nontrivial ({} candidates ruled out)", r.len())
            }
            FakeVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}
