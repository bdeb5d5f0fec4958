//! The curve `y^p = f(x)`, good divisors and function evaluation.

use std::fmt;
use std::sync::Arc;

use crate::basefield::{FieldElem, FieldSpec};
use crate::error::{Error, Result};
use crate::etale::EtaleAlgebra;
use crate::poly::{factor_mod_q, factor_over_q, Poly};

/// A validated model `y^p = f(x)` with `p | deg f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    alg: Arc<EtaleAlgebra>,
    genus: usize,
    d: usize,
}

impl Curve {
    /// Requires `mu_p` in the base field in addition to the algebra checks.
    pub fn new(p: u32, f: Poly, c0: FieldElem) -> Result<Curve> {
        let spec = f.spec();
        let alg = EtaleAlgebra::new(p, f, c0)?;
        spec.primitive_pth_root(p)?;
        Ok(Curve::from_algebra(alg))
    }

    pub fn from_algebra(alg: Arc<EtaleAlgebra>) -> Curve {
        let d = alg.radical().deg();
        let genus = (d - 2) * (alg.p() as usize - 1) / 2;
        Curve { alg, genus, d }
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.alg
    }

    pub fn p(&self) -> u32 {
        self.alg.p()
    }

    pub fn base(&self) -> FieldSpec {
        self.alg.base()
    }

    pub fn f(&self) -> &Poly {
        self.alg.f()
    }

    pub fn c(&self) -> &FieldElem {
        self.alg.c()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of distinct roots of `f`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degf(&self) -> usize {
        self.alg.degf()
    }

    /// Weight of `y` at infinity: `deg f / p`.
    pub fn y_weight(&self) -> usize {
        self.degf() / self.p() as usize
    }

    /// `z^p - a` as a polynomial in `z`.
    pub fn fiber_poly(&self, a: &FieldElem) -> Poly {
        let p = self.p() as usize;
        &Poly::monomial(self.base().one(), p) - &Poly::constant(a.clone())
    }

    pub fn is_on_curve(&self, x: &FieldElem, y: &FieldElem) -> bool {
        y.pow(self.p() as i64).unwrap() == self.f().eval(x)
    }

    /// The first of `0, 1, -1, 2, -2, ...` where `f` does not vanish.
    pub fn first_good_x(&self) -> FieldElem {
        let spec = self.base();
        (0i64..)
            .flat_map(|k| [k, -k])
            .map(|k| spec.from_i64(k))
            .find(|r| !self.f().eval(r).is_zero())
            .expect("f has finitely many roots")
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{} = {} over {}", self.p(), self.f(), self.base())
    }
}

/// A prime-free building block of a good divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorComponent {
    /// Points `(x, b(x))` with `a(x) = 0`.
    Horizontal { a: Poly, b: Poly },
    /// Points `(r, z)` with `m(z) = 0`.
    Fiber { r: FieldElem, m: Poly },
}

impl DivisorComponent {
    pub fn degree(&self) -> usize {
        match self {
            DivisorComponent::Horizontal { a, .. } => a.deg(),
            DivisorComponent::Fiber { m, .. } => m.deg(),
        }
    }

    pub(crate) fn validate(&self, curve: &Curve) -> Result<()> {
        match self {
            DivisorComponent::Horizontal { a, b } => {
                if a.deg() == 0
                    || !a.is_monic()
                    || !a.is_squarefree()
                    || (b.deg() >= a.deg() && !b.is_zero())
                {
                    return Err(Error::NotOnCurve(format!(
                        "horizontal component needs monic squarefree a and deg b < deg a (a = {a}, b = {b})"
                    )));
                }
                if !a.gcd(curve.algebra().radical()).is_one() {
                    return Err(Error::NotGood(format!("{a} meets the ramification points")));
                }
                let bp = b.pow_mod(&curve.p().into(), a);
                if !(&bp - &curve.f().rem(a)).is_zero() {
                    return Err(Error::NotOnCurve(format!("b^{} != f mod {a}", curve.p())));
                }
                Ok(())
            }
            DivisorComponent::Fiber { r, m } => {
                let fr = curve.f().eval(r);
                if fr.is_zero() {
                    return Err(Error::NotGood(format!("f({r}) = 0")));
                }
                if m.deg() == 0 || !m.is_monic() || !m.divides(&curve.fiber_poly(&fr)) {
                    return Err(Error::BadFiberFactor(format!(
                        "{m} does not divide z^{} - {fr}",
                        curve.p()
                    )));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for DivisorComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorComponent::Horizontal { a, b } => {
                write!(f, "H {} ; {}", a.to_coeff_string(), b.to_coeff_string())
            }
            DivisorComponent::Fiber { r, m } => write!(f, "F {r} ; {}", m.to_coeff_string()),
        }
    }
}

/// A formal sum of components whose support avoids the ramification
/// points and infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodDivisor {
    curve: Curve,
    terms: Vec<(DivisorComponent, i64)>,
}

impl GoodDivisor {
    pub fn new(curve: &Curve, terms: Vec<(DivisorComponent, i64)>) -> Result<GoodDivisor> {
        for (comp, _) in &terms {
            comp.validate(curve)?;
        }
        let mut d = GoodDivisor::zero(curve);
        for (comp, mult) in terms {
            d.push(comp, mult);
        }
        Ok(d)
    }

    pub fn zero(curve: &Curve) -> GoodDivisor {
        GoodDivisor {
            curve: curve.clone(),
            terms: Vec::new(),
        }
    }

    pub fn horizontal(curve: &Curve, a: Poly, b: Poly) -> Result<GoodDivisor> {
        GoodDivisor::new(curve, vec![(DivisorComponent::Horizontal { a, b }, 1)])
    }

    /// The rational point `(x, y)`.
    pub fn point(curve: &Curve, x: &FieldElem, y: &FieldElem) -> Result<GoodDivisor> {
        if !curve.is_on_curve(x, y) {
            return Err(Error::NotOnCurve(format!("({x}, {y})")));
        }
        GoodDivisor::horizontal(curve, Poly::linear_root(x), Poly::constant(y.clone()))
    }

    fn push(&mut self, comp: DivisorComponent, mult: i64) {
        if mult == 0 {
            return;
        }
        match self.terms.iter().position(|(c, _)| *c == comp) {
            Some(i) => {
                self.terms[i].1 += mult;
                if self.terms[i].1 == 0 {
                    self.terms.remove(i);
                }
            }
            None => self.terms.push((comp, mult)),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn terms(&self) -> &[(DivisorComponent, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(c, m)| c.degree() as i64 * m).sum()
    }

    pub fn add(&self, other: &GoodDivisor) -> GoodDivisor {
        let mut out = self.clone();
        for (c, m) in &other.terms {
            out.push(c.clone(), *m);
        }
        out
    }

    pub fn scale(&self, k: i64) -> GoodDivisor {
        let mut out = GoodDivisor::zero(&self.curve);
        for (c, m) in &self.terms {
            out.push(c.clone(), m * k);
        }
        out
    }

    pub fn neg(&self) -> GoodDivisor {
        self.scale(-1)
    }

    pub fn sub(&self, other: &GoodDivisor) -> GoodDivisor {
        self.add(&other.neg())
    }
}

impl fmt::Display for GoodDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} ; {m}")?;
        }
        Ok(())
    }
}

/// Monic irreducible factors of `z^p - a` over the base field, when the
/// factorization is available.
fn split_fiber_poly(curve: &Curve, a: &FieldElem) -> Vec<Poly> {
    let g = curve.fiber_poly(a);
    match curve.base() {
        FieldSpec::Rationals => factor_over_q(&g)
            .map(|(_, fs)| fs.into_iter().map(|(h, _)| h).collect())
            .unwrap_or_else(|_| vec![g]),
        FieldSpec::FinitePrime(_) => factor_mod_q(&g).into_iter().map(|(h, _)| h).collect(),
        FieldSpec::Cyclotomic(_) => {
            // With mu_p in k, z^p - a is irreducible unless a is a p-th power;
            // only rational p-th roots are detected.
            let p = curve.p();
            let root = a.as_rational().and_then(|r| rational_root(&r, p));
            match root {
                Some(r) => {
                    let zeta = curve.base().primitive_pth_root(p).unwrap();
                    let r = curve.base().from_rational(&r).unwrap();
                    (0..p)
                        .map(|i| Poly::linear_root(&(&r * &zeta.pow(i as i64).unwrap())))
                        .collect()
                }
                None => vec![g],
            }
        }
    }
}

fn rational_root(r: &num_rational::BigRational, p: u32) -> Option<num_rational::BigRational> {
    use num_traits::Signed;
    let root_int = |n: &num_bigint::BigInt| {
        let s = n.abs().nth_root(p);
        let s = if n.is_negative() { -s } else { s };
        (num_traits::pow(s.clone(), p as usize) == *n).then_some(s)
    };
    if r.is_negative() && p.is_multiple_of(2) {
        return None;
    }
    Some(num_rational::BigRational::new(
        root_int(r.numer())?,
        root_int(r.denom())?,
    ))
}

/// The full fiber `pi^*(r)` above `x = r`, split into irreducible fiber
/// components when `split` is set.
pub fn fiber_divisor(curve: &Curve, r: &FieldElem, split: bool) -> Result<GoodDivisor> {
    let fr = curve.f().eval(r);
    if fr.is_zero() {
        return Err(Error::RamifiedFiber);
    }
    let parts = if split {
        split_fiber_poly(curve, &fr)
    } else {
        vec![curve.fiber_poly(&fr)]
    };
    GoodDivisor::new(
        curve,
        parts
            .into_iter()
            .map(|m| (DivisorComponent::Fiber { r: r.clone(), m }, 1))
            .collect(),
    )
}

/// `div(prod (x - r)^e)` for `sum e = 0`, as a combination of fibers.
pub fn x_divisor(curve: &Curve, roots: &[(FieldElem, i64)], split: bool) -> Result<GoodDivisor> {
    let total: i64 = roots.iter().map(|(_, e)| e).sum();
    if total != 0 {
        return Err(Error::PoleAtInfinity);
    }
    let mut d = GoodDivisor::zero(curve);
    for (r, e) in roots {
        d = d.add(&fiber_divisor(curve, r, split)?.scale(*e));
    }
    Ok(d)
}

/// A function `num / den` with `num, den` written as `sum u_j(x) y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionRep {
    curve: Curve,
    num: Vec<Poly>,
    den: Vec<Poly>,
}

impl FunctionRep {
    pub fn new(curve: &Curve, num: Vec<Poly>, den: Vec<Poly>) -> Result<FunctionRep> {
        let p = curve.p() as usize;
        if num.len() > p || den.len() > p || den.iter().all(Poly::is_zero) {
            return Err(Error::DivisionByZero);
        }
        Ok(FunctionRep {
            curve: curve.clone(),
            num: pad(num, p, curve.base()),
            den: pad(den, p, curve.base()),
        })
    }

    pub fn constant(curve: &Curve, c: FieldElem) -> FunctionRep {
        FunctionRep::from_x(curve, Poly::constant(c), Poly::one(curve.base())).unwrap()
    }

    /// A function of `x` only.
    pub fn from_x(curve: &Curve, num: Poly, den: Poly) -> Result<FunctionRep> {
        FunctionRep::new(curve, vec![num], vec![den])
    }

    /// `prod (x - r)^e`.
    pub fn from_x_roots(curve: &Curve, roots: &[(FieldElem, i64)]) -> FunctionRep {
        let one = Poly::one(curve.base());
        let (mut num, mut den) = (one.clone(), one);
        for (r, e) in roots {
            let lin = Poly::linear_root(r).pow(e.unsigned_abs() as u32);
            if *e >= 0 {
                num = &num * &lin;
            } else {
                den = &den * &lin;
            }
        }
        FunctionRep::from_x(curve, num, den).unwrap()
    }

    pub fn y(curve: &Curve) -> FunctionRep {
        let spec = curve.base();
        FunctionRep::new(
            curve,
            vec![Poly::zero(spec), Poly::one(spec)],
            vec![Poly::one(spec)],
        )
        .unwrap()
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn num(&self) -> &[Poly] {
        &self.num
    }

    pub fn den(&self) -> &[Poly] {
        &self.den
    }

    pub fn mul(&self, other: &FunctionRep) -> FunctionRep {
        FunctionRep {
            curve: self.curve.clone(),
            num: ymul(&self.curve, &self.num, &other.num),
            den: ymul(&self.curve, &self.den, &other.den),
        }
    }

    /// Swap numerator and denominator.
    pub fn recip(&self) -> Result<FunctionRep> {
        FunctionRep::new(&self.curve, self.den.clone(), self.num.clone())
    }

    /// `h(D) = prod_P h(P)^{n_P}`.
    pub fn eval_on_divisor(&self, d: &GoodDivisor) -> Result<FieldElem> {
        let mut acc = self.curve.base().one();
        for (comp, mult) in d.terms() {
            let n = eval_component(&self.curve, &self.num, comp)?;
            let dv = eval_component(&self.curve, &self.den, comp)?;
            acc = &acc * &n.checked_div(&dv)?.pow(*mult)?;
        }
        Ok(acc)
    }

    /// `h(m)`: product of the values of `h` at the points above infinity.
    pub fn eval_at_infinity(&self) -> Result<FieldElem> {
        let (n, d) = self.leading_forms()?;
        let g = self.curve.fiber_poly(self.curve.c());
        let rn = g.resultant(&n);
        let rd = g.resultant(&d);
        if rn.is_zero() || rd.is_zero() {
            return Err(Error::PoleAtInfinity);
        }
        rn.checked_div(&rd)
    }

    /// Whether `h` is 1 at every point above infinity.
    pub fn is_omm(&self) -> Result<bool> {
        self.eval_at_infinity()?;
        let (n, d) = self.leading_forms()?;
        let g = self.curve.fiber_poly(self.curve.c());
        Ok((&n - &d).rem(&g).is_zero())
    }

    /// Weighted leading forms of numerator and denominator as polynomials in
    /// `z = y / x^(deg f / p)`.
    fn leading_forms(&self) -> Result<(Poly, Poly)> {
        let (dn, n) = leading_form(&self.curve, &self.num);
        let (dd, d) = leading_form(&self.curve, &self.den);
        if dn != dd || n.is_zero() || d.is_zero() {
            return Err(Error::PoleAtInfinity);
        }
        Ok((n, d))
    }
}

fn pad(mut v: Vec<Poly>, p: usize, spec: FieldSpec) -> Vec<Poly> {
    v.resize(p, Poly::zero(spec));
    v
}

fn ymul(curve: &Curve, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let p = curve.p() as usize;
    let mut out = vec![Poly::zero(curve.base()); p];
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            let mut t = u * v;
            if i + j >= p {
                t = &t * curve.f();
            }
            out[(i + j) % p] = &out[(i + j) % p] + &t;
        }
    }
    out
}

fn leading_form(curve: &Curve, u: &[Poly]) -> (Option<usize>, Poly) {
    let w = curve.y_weight();
    let wdeg = u
        .iter()
        .enumerate()
        .filter(|(_, uj)| !uj.is_zero())
        .map(|(j, uj)| uj.deg() + j * w)
        .max();
    let coeffs = u
        .iter()
        .enumerate()
        .map(|(j, uj)| {
            if !uj.is_zero() && Some(uj.deg() + j * w) == wdeg {
                uj.lc()
            } else {
                curve.base().zero()
            }
        })
        .collect();
    (wdeg, Poly::new(curve.base(), coeffs))
}

/// Product of `sum u_j y^j` over the points of one component.
fn eval_component(curve: &Curve, u: &[Poly], comp: &DivisorComponent) -> Result<FieldElem> {
    let spec = curve.base();
    let v = match comp {
        DivisorComponent::Horizontal { a, b } => {
            let mut acc = Poly::zero(spec);
            let mut bj = Poly::one(spec);
            for uj in u {
                acc = &acc + &uj.mul_mod(&bj, a);
                bj = bj.mul_mod(b, a);
            }
            a.resultant(&acc.rem(a))
        }
        DivisorComponent::Fiber { r, m } => {
            let g = Poly::new(spec, u.iter().map(|uj| uj.eval(r)).collect());
            m.resultant(&g)
        }
    };
    if v.is_zero() {
        return Err(Error::SupportOverlap);
    }
    Ok(v)
}
