//! Randomized identity checks over `Q` and cyclotomic bases.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basefield::{FieldElem, FieldSpec};
use crate::checks::{Check, Sink, Status};
use crate::curve::{fiber_divisor, x_divisor, Curve, FunctionRep, GoodDivisor};
use crate::descent::{descent_elem, eval_gamma_y, eval_x_minus_t, verify_principal_identity};
use crate::error::{Error, Result};
use crate::etale::DEFAULT_PRIME_BUDGET;
use crate::gamma::ClassVerdict;
use crate::jacobian2::{homomorphism_check, small_classes, MumfordClass};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub prime_budget: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            samples: 100,
            prime_budget: DEFAULT_PRIME_BUDGET,
        }
    }
}

/// `Q:p2:f=x^6+x^4+x^2+1`.
pub fn instance_token(curve: &Curve) -> String {
    let base = match curve.base() {
        FieldSpec::Rationals => "Q".to_string(),
        FieldSpec::Cyclotomic(p) => format!("Zeta{p}"),
        FieldSpec::FinitePrime(q) => format!("F{q}"),
    };
    let f = curve.f().pretty("x").replace(' ', "");
    let mut s = format!("{base}:p{}:f={f}", curve.p());
    if !curve.algebra().c0().is_one() {
        s.push_str(&format!(":c0={}", curve.algebra().c0()));
    }
    s
}

/// Random good divisors built from fibers and zero loci of `y - b(x)`.
pub struct DivisorSampler {
    curve: Curve,
    rng: ChaCha8Rng,
    radius: i64,
}

impl DivisorSampler {
    pub fn new(curve: &Curve, seed: u64) -> DivisorSampler {
        DivisorSampler {
            curve: curve.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            radius: 30,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// An `x`-coordinate where `f` does not vanish.
    pub fn good_x(&mut self) -> FieldElem {
        let spec = self.curve.base();
        loop {
            let r = spec.from_i64(self.rng.gen_range(-self.radius..=self.radius));
            if !self.curve.f().eval(&r).is_zero() {
                return r;
            }
        }
    }

    /// `k` pairwise distinct good `x`-coordinates.
    pub fn distinct_good_x(&mut self, k: usize) -> Vec<FieldElem> {
        let mut out: Vec<FieldElem> = Vec::new();
        while out.len() < k {
            let r = self.good_x();
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn fiber(&mut self) -> GoodDivisor {
        let r = self.good_x();
        let split = self.rng.gen_bool(0.5);
        fiber_divisor(&self.curve, &r, split).expect("good fiber")
    }

    /// Zero locus of `y - b(x)` for a random `b` of degree below `deg f / p`.
    pub fn horizontal(&mut self) -> (Poly, GoodDivisor) {
        let c = &self.curve;
        let spec = c.base();
        loop {
            let len = self.rng.gen_range(1..=c.y_weight());
            let bs: Vec<i64> = (0..len).map(|_| self.rng.gen_range(-3..=3)).collect();
            let b = Poly::from_i64s(spec, &bs);
            let a = (c.f() - &b.pow(c.p())).monic();
            if let Ok(d) = GoodDivisor::horizontal(c, a.clone(), b.rem(&a)) {
                return (b, d);
            }
        }
    }

    /// `(y - b(x)) / (x - s)^w` with its divisor.
    pub fn y_line(&mut self, s: &FieldElem) -> (FunctionRep, GoodDivisor) {
        let c = self.curve.clone();
        let w = c.y_weight();
        loop {
            let (b, horiz) = self.horizontal();
            let a = (c.f() - &b.pow(c.p())).monic();
            if a.eval(s).is_zero() {
                continue;
            }
            let poles = fiber_divisor(&c, s, false)
                .expect("good fiber")
                .scale(w as i64);
            let one = Poly::one(c.base());
            let h = FunctionRep::new(&c, vec![-&b, one], vec![Poly::linear_root(s).pow(w as u32)])
                .expect("nonzero function");
            return (h, horiz.sub(&poles));
        }
    }

    /// A sum of fibers and horizontal components; its degree is a multiple of `p`.
    pub fn divisor(&mut self) -> GoodDivisor {
        let mut d = GoodDivisor::zero(&self.curve);
        for _ in 0..self.rng.gen_range(1..=3) {
            let m = *[-2i64, -1, 1, 2].choose(&mut self.rng).unwrap();
            d = d.add(&self.fiber().scale(m));
        }
        if self.rng.gen_bool(0.7) {
            let horiz = self.horizontal().1;
            let m = if self.rng.gen_bool(0.5) { 1 } else { -1 };
            d = d.add(&horiz.scale(m));
        }
        d
    }

    /// A random divisor shifted to degree 0 by fibers over one point.
    pub fn degree_zero(&mut self) -> GoodDivisor {
        let d = self.divisor();
        let k = d.degree() / self.curve.p() as i64;
        let r = self.good_x();
        d.sub(&fiber_divisor(&self.curve, &r, false).unwrap().scale(k))
    }
}

pub fn run_verify(curve: &Curve, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if matches!(curve.base(), FieldSpec::FinitePrime(_)) {
        return Err(Error::UnsupportedBase(
            "verify runs over Q or Q(zeta_p); use the oracle over F_q".into(),
        ));
    }
    let mut sink = Sink::new(instance_token(curve));
    let mut s = DivisorSampler::new(curve, cfg.seed);
    let p = curve.p() as i64;
    let n = cfg.samples;

    let mut ok = 0;
    for _ in 0..n {
        let d = s.divisor();
        ok += (eval_x_minus_t(&d).weighted_norm()? == eval_gamma_y(&d)?.pow(p)?) as usize;
    }
    sink.tally("norm_identity", ok, n);

    let mut ok = 0;
    for _ in 0..n {
        let (d1, d2) = (s.divisor(), s.divisor());
        ok += (descent_elem(&d1.add(&d2))? == descent_elem(&d1)?.mul(&descent_elem(&d2)?)) as usize;
    }
    sink.tally("multiplicativity", ok, n);

    let mut ok = 0;
    for _ in 0..n {
        let rs = s.distinct_good_x(2);
        let roots = [(rs[0].clone(), 1), (rs[1].clone(), -1)];
        let h = FunctionRep::from_x_roots(curve, &roots);
        let split = s.rng().gen_bool(0.5);
        ok += verify_principal_identity(&h, &x_divisor(curve, &roots, split)?)? as usize;
    }
    sink.tally("principal_identity", ok, n);

    let mut ok = 0;
    for _ in 0..n {
        let x = s.good_x();
        let (h, dh) = s.y_line(&x);
        ok += verify_principal_identity(&h, &dh)? as usize;
    }
    sink.tally("principal_identity_y", ok, n);

    let mut ok = 0;
    for _ in 0..n {
        let rs = s.distinct_good_x(4);
        let rg = [(rs[0].clone(), 1), (rs[1].clone(), -1)];
        let rh = [(rs[2].clone(), 1), (rs[3].clone(), -1)];
        let (g, h) = (
            FunctionRep::from_x_roots(curve, &rg),
            FunctionRep::from_x_roots(curve, &rh),
        );
        let dg = x_divisor(curve, &rg, s.rng().gen_bool(0.5))?;
        let dh = x_divisor(curve, &rh, s.rng().gen_bool(0.5))?;
        ok += (g.eval_on_divisor(&dh)? == h.eval_on_divisor(&dg)?) as usize;
    }
    sink.tally("reciprocity", ok, n);

    if curve.p() == 2 && curve.genus() == 2 && curve.base() == FieldSpec::Rationals {
        homomorphism_suite(curve, cfg, &mut s, &mut sink)?;
    } else {
        sink.push(
            "homomorphism",
            Status::Skip,
            "(needs p = 2, genus 2, base Q)".into(),
        );
    }
    Ok(sink.checks)
}

fn homomorphism_suite(
    curve: &Curve,
    cfg: &VerifyConfig,
    s: &mut DivisorSampler,
    sink: &mut Sink,
) -> Result<()> {
    let cls = small_classes(curve, 2, 12)?;
    if cls.len() < 2 {
        sink.push(
            "homomorphism",
            Status::Skip,
            format!("({} small classes)", cls.len()),
        );
        return Ok(());
    }
    let r0 = curve.first_good_x();
    let pick = |s: &mut DivisorSampler| -> Result<MumfordClass> {
        let a = cls.choose(s.rng()).unwrap();
        let b = cls.choose(s.rng()).unwrap();
        if s.rng().gen_bool(0.5) {
            a.add(b)
        } else {
            a.sub(b)
        }
    };
    let (mut equal, mut distinct, mut inconclusive, mut resampled) = (0, 0, 0, 0);
    while equal + distinct + inconclusive < cfg.samples {
        let seed = s.rng().gen();
        let verdict = pick(s).and_then(|a| {
            let b = pick(s)?;
            homomorphism_check(&a, &b, &r0, cfg.prime_budget, seed)
        });
        match verdict {
            Ok(ClassVerdict::Equal { .. }) => equal += 1,
            Ok(ClassVerdict::Distinct(_)) => distinct += 1,
            Ok(ClassVerdict::Inconclusive) => inconclusive += 1,
            Err(Error::NonGoodIntermediate) | Err(Error::NotGood(_))
                if resampled < 10 * cfg.samples =>
            {
                resampled += 1
            }
            Err(e) => return Err(e),
        }
    }
    let total = equal + distinct + inconclusive;
    let status = if equal == total {
        Status::Pass
    } else {
        Status::Fail
    };
    sink.push(
        "homomorphism",
        status,
        format!("({equal}/{total} equal, {inconclusive} inconclusive, {resampled} resampled)"),
    );
    Ok(())
}

#[cfg(test)]
mod tests;
