//! Factorization over Q: square-free split, factorization modulo a good
//! prime, quadratic Hensel lifting and exhaustive recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{factor_mod_q, zmod, Poly};
use crate::arith::{bigint_mod_u64, inv_mod_big, primes_from};
use crate::basefield::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

/// Largest square-free part degree handled by recombination.
pub const FACTOR_DEGREE_BOUND: usize = 24;

fn to_fq(f: &[BigInt], q: u64) -> Poly {
    let spec = FieldSpec::FinitePrime(q);
    Poly::new(
        spec,
        f.iter()
            .map(|c| FieldElem::Residue {
                q,
                v: bigint_mod_u64(c, q),
            })
            .collect(),
    )
}

fn from_fq(f: &Poly) -> Vec<BigInt> {
    f.coeffs()
        .iter()
        .map(|c| BigInt::from(c.as_residue().unwrap()))
        .collect()
}

/// Factors `f` (monic modulo `M = q^(2^j)`) into lifts of `parts`.
fn lift_all(f: &[BigInt], parts: &[Poly], q: u64, big_m: &BigInt) -> Vec<Vec<BigInt>> {
    if parts.len() == 1 {
        return vec![zmod::reduce(f, big_m)];
    }
    let spec = FieldSpec::FinitePrime(q);
    let (left, right) = parts.split_at(parts.len() / 2);
    let g0 = left.iter().fold(Poly::one(spec), |a, b| &a * b);
    let h0 = right.iter().fold(Poly::one(spec), |a, b| &a * b);
    let (one, s0, t0) = g0.xgcd(&h0);
    debug_assert!(one.is_one());
    let (mut g, mut h, mut s, mut t) = (from_fq(&g0), from_fq(&h0), from_fq(&s0), from_fq(&t0));
    let mut m = BigInt::from(q);
    while &m < big_m {
        (g, h, s, t) = zmod::hensel_step(&zmod::reduce(f, &(&m * &m)), &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = lift_all(&g, left, q, big_m);
    out.extend(lift_all(&h, right, q, big_m));
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let c = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if v.last().is_some_and(Signed::is_negative) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    v.iter().map(|x| x / &c * &sign).collect()
}

/// Divide integer polynomials exactly, if possible.
fn exact_int_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let (c, rest) = r[i + db].div_rem(&b[db]);
        if !rest.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &c * bc;
        }
        quot[i] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(quot)
    } else {
        None
    }
}

/// Irreducible factors of a primitive square-free integer polynomial.
fn factor_squarefree_int(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    if n > FACTOR_DEGREE_BOUND {
        return Err(Error::DegreeTooLarge(n));
    }
    let lc = f[n].clone();
    // Among the first few good primes keep the one with fewest modular factors.
    let mut best: Option<(u64, Vec<Poly>)> = None;
    let mut tried = 0;
    for q in primes_from(3) {
        if (&lc % BigInt::from(q)).is_zero() {
            continue;
        }
        let fq = to_fq(f, q);
        if !fq.is_squarefree() {
            continue;
        }
        let parts: Vec<Poly> = factor_mod_q(&fq).into_iter().map(|(g, _)| g).collect();
        if best.as_ref().is_none_or(|(_, b)| parts.len() < b.len()) {
            best = Some((q, parts));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (q, parts) = best.expect("some prime is good");
    if parts.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << (n + 1)) * norm1 * lc.abs();
    let mut big_m = BigInt::from(q);
    while big_m <= bound {
        big_m = &big_m * &big_m;
    }
    let inv_lc = inv_mod_big(&lc, &big_m).unwrap();
    let f_monic = zmod::scale(f, &inv_lc, &big_m);
    let mut lifted = lift_all(&f_monic, &parts, q, &big_m);
    let mut rest = f.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc_rest = rest.last().unwrap().clone();
            let cand = idx.iter().fold(vec![lc_rest.clone()], |acc, &i| {
                zmod::mul(&acc, &lifted[i], &big_m)
            });
            let cand = primitive(&zmod::symmetric(&cand, &big_m));
            if let Some(quot) = exact_int_div(&rest, &cand) {
                found.push(cand);
                rest = quot;
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        s += 1;
    }
    found.push(primitive(&rest));
    Ok(found)
}

/// Factor a polynomial over Q: `f = content * prod g_i^{m_i}` with monic
/// irreducible `g_i` in canonical order (degree, then coefficients).
pub fn factor_over_q(f: &Poly) -> Result<(FieldElem, Vec<(Poly, u32)>)> {
    if f.spec() != FieldSpec::Rationals {
        return Err(Error::FieldMismatch(format!(
            "factor_over_q called over {}",
            f.spec()
        )));
    }
    let sqf = f.yun_squarefree()?;
    let mut out = Vec::new();
    for (part, m) in &sqf.parts {
        let ints = part.to_primitive_integers();
        for g in factor_squarefree_int(&ints)? {
            out.push((Poly::from_integers(FieldSpec::Rationals, &g).monic(), *m));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        let key = |p: &Poly| -> (usize, Vec<BigRational>) {
            (
                p.deg(),
                p.coeffs()
                    .iter()
                    .map(|c| c.as_rational().unwrap())
                    .collect(),
            )
        };
        key(a).cmp(&key(b))
    });
    Ok((sqf.content, out))
}
