//! Factorization over prime fields: square-free split, distinct-degree and
//! equal-degree (Cantor-Zassenhaus) factorization.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::basefield::{FieldElem, FieldSpec};

fn modulus(f: &Poly) -> u64 {
    match f.spec() {
        FieldSpec::FinitePrime(q) => q,
        other => panic!("finite-field factorization over {other}"),
    }
}

/// Canonical ordering: by degree, then by residue coefficient vectors.
pub(crate) fn sort_key(f: &Poly) -> (usize, Vec<u64>) {
    (
        f.deg(),
        f.coeffs()
            .iter()
            .map(|c| c.as_residue().unwrap_or(0))
            .collect(),
    )
}

/// Square-free decomposition over `F_q`, valid in every characteristic.
/// Returns monic parts with multiplicities (parts of equal multiplicity merged).
pub fn squarefree_mod_q(f: &Poly) -> Vec<(Poly, u32)> {
    let q = modulus(f);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    sqf_rec(&f.monic(), q, 1, &mut out);
    out.sort_by_key(|a| a.1);
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, k)) if *k == m => *h = &*h * &g,
            _ => merged.push((g, m)),
        }
    }
    merged
}

fn sqf_rec(f: &Poly, q: u64, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if fac.deg() > 0 {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.exact_div(&w);
        i += 1;
    }
    if c.deg() > 0 {
        // c is a polynomial in x^q; over a prime field its q-th root just
        // divides the exponents by q.
        let coeffs: Vec<FieldElem> = c.coeffs().iter().step_by(q as usize).cloned().collect();
        let root = Poly::new(f.spec(), coeffs);
        sqf_rec(&root, q, scale * q as u32, out);
    }
}

fn distinct_degree(f: &Poly, q: u64) -> Vec<(Poly, usize)> {
    let spec = f.spec();
    let x = Poly::x(spec);
    let qb = BigUint::from(q);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&qb, &rest);
        let g = (&h - &x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

fn random_poly(spec: FieldSpec, q: u64, deg_bound: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..deg_bound)
        .map(|_| FieldElem::Residue {
            q,
            v: rng.gen_range(0..q),
        })
        .collect();
    Poly::new(spec, coeffs)
}

fn equal_degree(g: &Poly, d: usize, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if g.deg() == d {
        out.push(g.clone());
        return;
    }
    let spec = g.spec();
    let one = Poly::one(spec);
    let exp = if q != 2 {
        (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1
    } else {
        BigUint::one()
    };
    loop {
        let a = random_poly(spec, q, g.deg(), rng);
        if a.deg() == 0 {
            continue;
        }
        let b = if q == 2 {
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, g);
                acc = &acc + &t;
            }
            acc
        } else {
            &a.pow_mod(&exp, g) - &one
        };
        let u = b.gcd(g);
        if u.deg() > 0 && u.deg() < g.deg() {
            let v = g.exact_div(&u);
            equal_degree(&u, d, q, rng, out);
            equal_degree(&v, d, q, rng, out);
            return;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, in
/// canonical order. The constant factor is dropped.
pub fn factor_mod_q(f: &Poly) -> Vec<(Poly, u32)> {
    let q = modulus(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ q);
    let mut out = Vec::new();
    for (part, m) in squarefree_mod_q(f) {
        for (g, d) in distinct_degree(&part, q) {
            let mut irr = Vec::new();
            equal_degree(&g, d, q, &mut rng, &mut irr);
            out.extend(irr.into_iter().map(|h| (h, m)));
        }
    }
    out.sort_by_key(|(g, _)| sort_key(g));
    out
}

pub fn is_irreducible_mod_q(f: &Poly) -> bool {
    if f.deg() == 0 {
        return false;
    }
    let fs = factor_mod_q(f);
    fs.len() == 1 && fs[0].1 == 1
}
