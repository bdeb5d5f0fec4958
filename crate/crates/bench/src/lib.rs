//! Benchmark fixtures.

use cyclodescent::suites::DivisorSampler;
use cyclodescent::{Curve, FieldSpec, GoodDivisor, Poly};

fn curve(k: FieldSpec, p: u32, f: &[i64]) -> Curve {
    Curve::new(p, Poly::from_i64s(k, f), k.one()).expect("valid curve")
}

/// `y^2 = x^6 + x^4 + x^2 + 1` over `Q`.
pub fn genus2() -> Curve {
    curve(FieldSpec::Rationals, 2, &[1, 0, 1, 0, 1, 0, 1])
}

/// `y^3 = x^2 (x^2 - 1)^2` over `Q(zeta_3)`.
pub fn trigonal() -> Curve {
    curve(FieldSpec::Cyclotomic(3), 3, &[0, 0, 1, 0, -2, 0, 1])
}

/// `y^2 = (x - 1) ... (x - 6)` over `F_13`.
pub fn split_f13() -> Curve {
    curve(FieldSpec::FinitePrime(13), 2, &[5, 4, 12, 6, 6, 5, 1])
}

pub fn divisors(curve: &Curve, seed: u64, n: usize) -> Vec<GoodDivisor> {
    let mut s = DivisorSampler::new(curve, seed);
    (0..n).map(|_| s.divisor()).collect()
}

pub fn degree_zero_divisors(curve: &Curve, seed: u64, n: usize) -> Vec<GoodDivisor> {
    let mut s = DivisorSampler::new(curve, seed);
    (0..n).map(|_| s.degree_zero()).collect()
}
