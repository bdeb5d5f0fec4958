//! `Pic^0` and `Pic_m^0` of `y^p = f(x)` over `F_q`, presented on the good
//! closed points of degree at most 2 with relations from divisors of
//! functions.
//!
//! Relations come from `H = sum u_j(x) y^j` whose zeros are all found among
//! the generators with total degree `p K`, counted with multiplicity, where
//! `K` is the pole order of `H` at each point above infinity. Such an `H`
//! takes the values `l(z)` at infinity, `l` its leading form, so `H / (x - s)^K`
//! is a unit at `m`; quotients of two of them with proportional leading
//! forms are `1 mod m` after scaling.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::{residues, Fq2Elem};
use super::points::{ClosedPoint, CurveScan, PointKind};
use super::zlinalg::{Combination, FiniteGroup, Lattice};
use crate::basefield::FieldSpec;
use crate::curve::{Curve, DivisorComponent, GoodDivisor};
use crate::error::{Error, Result};
use crate::etale::EtaleElem;
use crate::poly::{factor_mod_q, Poly};

/// Largest `q` accepted by the exhaustive constructions.
pub const MAX_Q: u64 = 13;

pub fn check_envelope(curve: &Curve) -> Result<u64> {
    let FieldSpec::FinitePrime(q) = curve.base() else {
        return Err(Error::Envelope(format!(
            "oracle needs a prime field, got {}",
            curve.base()
        )));
    };
    if q > MAX_Q || curve.genus() > 2 {
        return Err(Error::Envelope(format!(
            "q = {q}, genus {} (need q <= {MAX_Q}, genus <= 2)",
            curve.genus()
        )));
    }
    if (q - 1) % curve.p() as u64 != 0 {
        return Err(Error::BadResidue { q, p: curve.p() });
    }
    Ok(q)
}

/// `#J(F_q) = L(1)` from `#C(F_q)` and `#C(F_{q^2})`.
pub fn jacobian_order(genus: usize, q: u64, n1: u64, n2: u64) -> i64 {
    let (q, n1, n2) = (q as i64, n1 as i64, n2 as i64);
    match genus {
        0 => 1,
        1 => n1,
        _ => {
            let a1 = n1 - q - 1;
            let s2 = q * q + 1 - n2;
            let a2 = (a1 * a1 - s2) / 2;
            1 + a1 + a2 + q * a1 + q * q
        }
    }
}

/// `|(F_q[z]/(z^p - c))^*| / (q - 1)`, the order of the torus `J_m -> J`.
pub fn torus_order(curve: &Curve, q: u64) -> u64 {
    let zp = curve.fiber_poly(curve.c());
    let units: u64 = factor_mod_q(&zp)
        .iter()
        .map(|(g, e)| (q.pow(g.deg() as u32) - 1) * q.pow((g.deg() * (*e as usize - 1)) as u32))
        .product();
    units / (q - 1)
}

/// Budget for the relation search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_attempts: usize,
    /// Stop after this many consecutive located functions that change
    /// neither lattice, once both have full rank.
    pub patience: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_attempts: 40_000,
            patience: 400,
        }
    }
}

/// A located function `H / (lambda (x - s)^K)`.
struct Atom {
    row: Vec<i64>,
    hw: EtaleElem,
}

pub struct PicardModel {
    scan: CurveScan,
    points: Vec<ClosedPoint>,
    base: usize,
    relations: Vec<EtaleElem>,
    omm_rows: Vec<Vec<i64>>,
    pic_m: FiniteGroup,
    pic0: FiniteGroup,
    unit_exponent: i64,
    attempts: usize,
    located: usize,
}

/// A generator with the values of `Y_j` there.
struct Gen {
    x: Fq2Elem,
    y: Fq2Elem,
    ys: Vec<Fq2Elem>,
    deg: usize,
}

struct Builder<'a> {
    scan: &'a CurveScan,
    gens: Vec<Gen>,
    /// Pole order of `Y_j = y^j / D_j` at each point above infinity.
    ydeg: Vec<usize>,
    /// Denominator `D_j` of `Y_j` as (factor, exponent) pairs.
    dens: Vec<Vec<(Vec<u64>, u32)>>,
    f: Vec<u64>,
    base: usize,
    s: u64,
    fiber_s: Vec<i64>,
    first_by_form: HashMap<Vec<u64>, Atom>,
    lat_m: Lattice,
    lat0: Lattice,
    relations: Vec<EtaleElem>,
    omm_rows: Vec<Vec<i64>>,
    src0: usize,
}

impl Builder<'_> {
    fn project(&self, row: &[i64]) -> Vec<i64> {
        row.iter()
            .enumerate()
            .filter(|(i, _)| *i != self.base)
            .map(|(_, v)| *v)
            .collect()
    }

    /// Order of vanishing of `sum u_j Y_j` at the good point `(x, y)`, up to `prec`.
    fn zero_order(&self, u: &[Vec<u64>], x: Fq2Elem, y: Fq2Elem, prec: usize) -> usize {
        let k = &self.scan.k;
        let p = self.scan.curve.p() as usize;
        let mul = |a: &[Fq2Elem], b: &[Fq2Elem]| -> Vec<Fq2Elem> {
            let mut c = vec![k.zero(); prec];
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate().take(prec - i) {
                    c[i + j] = k.add(c[i + j], k.mul(ai, bj));
                }
            }
            c
        };
        // g(x + t) truncated.
        let shift = |g: &[u64]| -> Vec<Fq2Elem> {
            let lin = [x, k.one()];
            g.iter().rev().fold(vec![k.zero(); prec], |acc, &c| {
                let mut s = mul(&acc, &lin);
                s[0] = k.add(s[0], k.from_base(c));
                s
            })
        };
        let inv = |a: &[Fq2Elem]| -> Vec<Fq2Elem> {
            let a0 = k.inv(a[0]).expect("unit series");
            let mut b = vec![k.zero(); prec];
            b[0] = a0;
            for n in 1..prec {
                let s = (1..=n).fold(k.zero(), |s, i| k.add(s, k.mul(a[i], b[n - i])));
                b[n] = k.neg(k.mul(s, a0));
            }
            b
        };
        // y(t) with y^p = f(x + t), lifted one coefficient at a time.
        let fs = shift(&self.f);
        let scale = k
            .inv(k.mul(k.from_base(p as u64), k.pow(y, p as u64 - 1)))
            .expect("p is a unit");
        let mut ys = vec![k.zero(); prec];
        ys[0] = y;
        for n in 1..prec {
            let pw = (1..p).fold(ys.clone(), |acc, _| mul(&acc, &ys));
            ys[n] = k.mul(k.sub(fs[n], pw[n]), scale);
        }
        let mut one = vec![k.zero(); prec];
        one[0] = k.one();
        let mut total = vec![k.zero(); prec];
        let mut yj = one.clone();
        for (j, uj) in u.iter().enumerate().take(p) {
            let den = self.dens[j].iter().fold(one.clone(), |acc, (g, e)| {
                (0..*e).fold(acc, |acc, _| mul(&acc, &shift(g)))
            });
            let term = mul(&mul(&shift(uj), &yj), &inv(&den));
            total
                .iter_mut()
                .zip(&term)
                .for_each(|(t, s)| *t = k.add(*t, *s));
            yj = mul(&yj, &ys);
        }
        total.iter().position(|c| *c != k.zero()).unwrap_or(prec)
    }

    /// A random nonzero `H` with pole order at most `K` through random
    /// generators of total degree one less than the number of monomials.
    fn interpolate(&self, rng: &mut ChaCha8Rng, big_k: usize) -> Option<Vec<Vec<u64>>> {
        let (k, q) = (&self.scan.k, self.scan.q());
        let p = self.scan.curve.p() as usize;
        let monomials: Vec<(usize, usize)> = (0..p)
            .filter(|&j| self.ydeg[j] <= big_k)
            .flat_map(|j| (0..=big_k - self.ydeg[j]).map(move |i| (i, j)))
            .collect();
        let target = monomials.len() - 1;
        let mut order: Vec<usize> = (0..self.gens.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut total = 0;
        for &g in &order {
            let Gen { x, ref ys, deg, .. } = self.gens[g];
            if total + deg > target {
                continue;
            }
            total += deg;
            let vals: Vec<Fq2Elem> = monomials
                .iter()
                .map(|&(i, j)| k.mul(k.pow(x, i as u64), ys[j]))
                .collect();
            rows.push(vals.iter().map(|v| v.a).collect());
            if deg == 2 {
                rows.push(vals.iter().map(|v| v.b).collect());
            }
        }
        let kernel = nullspace_mod(rows, monomials.len(), q);
        if kernel.is_empty() {
            return None;
        }
        let mut coeffs = vec![0u64; monomials.len()];
        for v in &kernel {
            let t = rng.gen_range(0..q);
            for (c, x) in coeffs.iter_mut().zip(v) {
                *c = (*c + t * x) % q;
            }
        }
        let mut u = vec![Vec::new(); p];
        for (&(i, j), c) in monomials.iter().zip(&coeffs) {
            if u[j].len() <= i {
                u[j].resize(i + 1, 0);
            }
            u[j][i] = *c;
        }
        Some(u)
    }

    /// Insert a located `H`; returns whether a lattice grew.
    fn add_function(&mut self, u: &[Vec<u64>]) -> Result<bool> {
        let scan = self.scan;
        let (k, q, p) = (&scan.k, scan.q(), scan.curve.p() as usize);
        let mut u = u.to_vec();
        u.resize(p, Vec::new());
        let pole = (0..p)
            .filter(|&j| u[j].iter().any(|c| *c != 0))
            .map(|j| u[j].iter().rposition(|c| *c != 0).unwrap() + self.ydeg[j])
            .max();
        let Some(big_k) = pole else { return Ok(false) };
        if big_k == 0 {
            return Ok(false);
        }
        let form: Vec<u64> = (0..p)
            .map(|j| {
                big_k
                    .checked_sub(self.ydeg[j])
                    .and_then(|i| u[j].get(i).copied())
                    .unwrap_or(0)
            })
            .collect();
        let mut row = vec![0i64; self.gens.len()];
        let mut zeros = 0;
        for (idx, g) in self.gens.iter().enumerate() {
            let acc = u.iter().zip(&g.ys).fold(k.zero(), |acc, (uj, yj)| {
                k.add(acc, k.mul(k.eval(uj, g.x), *yj))
            });
            if acc == k.zero() {
                let m = self.zero_order(&u, g.x, g.y, p * big_k + 1);
                row[idx] += m as i64;
                zeros += m * g.deg;
            }
        }
        if zeros != p * big_k {
            return Ok(false);
        }
        let spec = scan.curve.base();
        let poly =
            |cs: &[u64]| Poly::new(spec, cs.iter().map(|&c| spec.from_i64(c as i64)).collect());
        let zpoly = poly(&form);
        let zp = scan.curve.fiber_poly(scan.curve.c());
        if !zpoly.gcd(&zp).is_one() {
            return Ok(false);
        }
        let u0 = poly(&u[0]);
        if !u0.gcd(scan.curve.f()).is_one() {
            return Ok(false);
        }
        for (r, f) in row.iter_mut().zip(&self.fiber_s) {
            *r -= big_k as i64 * f;
        }
        let lambda = *form.iter().rev().find(|c| **c != 0).unwrap();
        let lambda_inv = crate::arith::inv_mod(lambda, q).unwrap();
        let normalized: Vec<u64> = form.iter().map(|c| c * lambda_inv % q).collect();
        let alg = scan.curve.algebra();
        let t_minus_s = &alg.t() - &alg.constant(spec.from_i64(self.s as i64));
        let hw = alg.elem(u0).checked_div(
            &t_minus_s
                .pow(big_k as i64)?
                .scale(&spec.from_i64(lambda as i64)),
        )?;
        let atom = Atom { row, hw };
        let mut grew = self.lat0.insert(&self.project(&atom.row), self.src0);
        self.src0 += 1;
        let omm = match self.first_by_form.get(&normalized) {
            _ if normalized.iter().skip(1).all(|c| *c == 0) => {
                Some((atom.row.clone(), atom.hw.clone()))
            }
            Some(first) => {
                let r: Vec<i64> = atom
                    .row
                    .iter()
                    .zip(&first.row)
                    .map(|(a, b)| a - b)
                    .collect();
                Some((r, atom.hw.checked_div(&first.hw)?))
            }
            None => None,
        };
        match omm {
            Some((r, hw)) => {
                if self.lat_m.insert(&self.project(&r), self.relations.len()) {
                    self.relations.push(hw);
                    self.omm_rows.push(r);
                    grew = true;
                }
            }
            None => {
                self.first_by_form.insert(normalized, atom);
            }
        }
        Ok(grew)
    }
}

impl PicardModel {
    pub fn build(curve: &Curve, seed: u64, budget: SearchBudget) -> Result<PicardModel> {
        let q = check_envelope(curve)?;
        let scan = CurveScan::new(curve)?;
        let points: Vec<ClosedPoint> = scan
            .enumerate_points(2)?
            .into_iter()
            .filter(|pt| matches!(pt.kind, PointKind::Good(_)))
            .collect();
        let p = curve.p() as usize;
        let k = &scan.k;
        // A rational s whose whole fiber is among the generators.
        let (s, fiber_s) = (0..q)
            .find_map(|s| {
                let row: Vec<i64> = points
                    .iter()
                    .map(|pt| (pt.rep.0 == k.from_base(s)) as i64)
                    .collect();
                let deg: usize = points
                    .iter()
                    .zip(&row)
                    .map(|(pt, r)| pt.degree * *r as usize)
                    .sum();
                (deg == p).then_some((s, row))
            })
            .ok_or_else(|| {
                Error::NoRepresentative("no rational fiber of good points of degree <= 2".into())
            })?;
        let base = (0..points.len())
            .min_by_key(|&i| points[i].degree)
            .ok_or_else(|| Error::NoRepresentative("no good points of degree <= 2".into()))?;
        let w = curve.y_weight();
        let parts: Vec<(Vec<u64>, u32)> = curve
            .algebra()
            .sqfree()
            .parts
            .iter()
            .map(|(g, m)| (residues(g), *m))
            .collect();
        let dens: Vec<Vec<(Vec<u64>, u32)>> = (0..p as u32)
            .map(|j| {
                parts
                    .iter()
                    .map(|(g, m)| (g.clone(), j * m / p as u32))
                    .collect()
            })
            .collect();
        let ydeg: Vec<usize> = (0..p)
            .map(|j| {
                j * w
                    - dens[j]
                        .iter()
                        .map(|(g, e)| (g.len() - 1) * *e as usize)
                        .sum::<usize>()
            })
            .collect();
        let gens = points
            .iter()
            .map(|pt| {
                let (x, y) = pt.rep;
                let ys = (0..p)
                    .map(|j| {
                        let den = dens[j].iter().fold(k.one(), |acc, (g, e)| {
                            k.mul(acc, k.pow(k.eval(g, x), *e as u64))
                        });
                        k.mul(
                            k.pow(y, j as u64),
                            k.inv(den).expect("good points avoid the roots of f"),
                        )
                    })
                    .collect();
                Gen {
                    x,
                    y,
                    ys,
                    deg: pt.degree,
                }
            })
            .collect();
        let n = points.len() - 1;
        let unit_exponent: i64 = factor_mod_q(curve.algebra().radical())
            .iter()
            .map(|(g, _)| q.pow(g.deg() as u32) as i64 - 1)
            .product();
        let mut b = Builder {
            scan: &scan,
            gens,
            ydeg,
            dens,
            f: residues(curve.f()),
            base,
            s,
            fiber_s,
            first_by_form: HashMap::new(),
            lat_m: Lattice::with_source_modulus(n, BigInt::from(unit_exponent)),
            lat0: Lattice::with_source_modulus(n, BigInt::one()),
            relations: Vec::new(),
            omm_rows: Vec::new(),
            src0: 0,
        };
        // Fibers over the degree 1 and 2 places of the x-line first.
        for r in 0..q {
            b.add_function(&[vec![(q - r) % q, 1]])?;
        }
        for c0 in 0..q {
            for c1 in 0..q {
                b.add_function(&[vec![c0, c1, 1]])?;
            }
        }
        // Weighted degree at most 2g + 2.
        let max_k = w.max(2 * curve.genus() + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut attempts, mut located, mut quiet) = (0, 0, 0);
        while attempts < budget.max_attempts {
            if b.lat_m.is_full_rank() && b.lat0.is_full_rank() && quiet >= budget.patience {
                break;
            }
            attempts += 1;
            let big_k = rng.gen_range(w..=max_k);
            let Some(u) = b.interpolate(&mut rng, big_k) else {
                continue;
            };
            let before = (b.lat_m.rank(), b.lat0.rank());
            let src_before = b.src0;
            let grew = b.add_function(&u)?;
            if b.src0 > src_before {
                located += 1;
                if grew || (b.lat_m.rank(), b.lat0.rank()) != before {
                    quiet = 0;
                } else {
                    quiet += 1;
                }
            }
        }
        let Builder {
            lat_m,
            lat0,
            relations,
            omm_rows,
            ..
        } = b;
        let pic_m = FiniteGroup::new(lat_m)?;
        let pic0 = FiniteGroup::new(lat0)?;
        Ok(PicardModel {
            scan,
            points,
            base,
            relations,
            omm_rows,
            pic_m,
            pic0,
            unit_exponent,
            attempts,
            located,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.scan.curve
    }

    pub fn scan(&self) -> &CurveScan {
        &self.scan
    }

    /// The generators: good closed points of degree at most 2.
    pub fn points(&self) -> &[ClosedPoint] {
        &self.points
    }

    pub fn pic0(&self) -> &FiniteGroup {
        &self.pic0
    }

    pub fn pic_m(&self) -> &FiniteGroup {
        &self.pic_m
    }

    /// `(attempted, located)` functions in the relation search.
    pub fn search_stats(&self) -> (usize, usize) {
        (self.attempts, self.located)
    }

    pub fn degree(&self, v: &[i64]) -> i64 {
        v.iter()
            .zip(&self.points)
            .map(|(a, pt)| a * pt.degree as i64)
            .sum()
    }

    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .enumerate()
            .filter(|(i, _)| *i != self.base)
            .map(|(_, x)| *x)
            .collect()
    }

    /// A degree-0 divisor vector from projected coordinates.
    pub fn unproject(&self, u: &[BigInt]) -> Result<Vec<i64>> {
        let small: Vec<i64> = u
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::TooLarge(format!("multiplicity {x}")))
            })
            .collect::<Result<_>>()?;
        let mut full: Vec<i64> = Vec::with_capacity(small.len() + 1);
        full.extend_from_slice(&small[..self.base]);
        full.push(0);
        full.extend_from_slice(&small[self.base..]);
        let deg = self.degree(&full);
        full[self.base] = -deg / self.points[self.base].degree as i64;
        Ok(full)
    }

    pub fn divisor(&self, v: &[i64]) -> Result<GoodDivisor> {
        let terms: Vec<(DivisorComponent, i64)> = v
            .iter()
            .zip(&self.points)
            .filter(|(m, _)| **m != 0)
            .map(|(m, pt)| match &pt.kind {
                PointKind::Good(c) => (c.clone(), *m),
                _ => unreachable!("generators are good"),
            })
            .collect();
        GoodDivisor::new(self.curve(), terms)
    }

    /// `h(W)` for an omm `h` with `div h = v`, if `v` is principal in
    /// `Pic_m`.
    pub fn omm_value_at_w(&self, v: &[i64]) -> Result<Option<EtaleElem>> {
        let Some(comb) = self.pic_m.principal_combination(&self.project(v)) else {
            return Ok(None);
        };
        Ok(Some(self.evaluate(&comb)?))
    }

    fn evaluate(&self, comb: &Combination) -> Result<EtaleElem> {
        let alg = self.curve().algebra();
        let e = BigInt::from(self.unit_exponent);
        let mut acc = alg.one();
        for (i, k) in comb {
            let k = k.mod_floor_i64(&e);
            acc = &acc * &self.relations[*i].pow(k)?;
        }
        Ok(acc)
    }

    /// A random degree-0 divisor vector supported on a few generators.
    pub fn random_divisor(&self, rng: &mut ChaCha8Rng, terms: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.points.len()];
        for _ in 0..terms {
            let i = rng.gen_range(0..self.points.len());
            v[i] += rng.gen_range(-2..=2);
        }
        let mut pos = v.clone();
        pos[self.base] = 0;
        let deg = self.degree(&pos);
        let d0 = self.points[self.base].degree as i64;
        if deg % d0 != 0 {
            let i = (0..self.points.len())
                .find(|&i| self.points[i].degree == 1)
                .expect("mixed degrees include 1");
            pos[i] += 1;
        }
        let deg = self.degree(&pos);
        pos[self.base] = -deg / d0;
        pos
    }

    /// Divisors of the omm relations, as vectors on the generators.
    pub fn omm_rows(&self) -> &[Vec<i64>] {
        &self.omm_rows
    }

    /// A divisor `D'` with `p D' ~ D` in `Pic_m^0`, shifted by a random
    /// `p`-torsion class, or `None` when the class of `D` is not in `p Pic_m^0`.
    pub fn p_divide(&self, v: &[i64], rng: &mut ChaCha8Rng) -> Result<Option<Vec<i64>>> {
        use num_integer::Integer;
        let p = BigInt::from(self.curve().p());
        let coords = self.pic_m.coords(&self.project(v));
        let mut t = Vec::with_capacity(coords.len());
        for (c, s) in coords.iter().zip(self.pic_m.diagonal()) {
            if (s % &p).is_zero() {
                if !(c % &p).is_zero() {
                    return Ok(None);
                }
                let shift = BigInt::from(rng.gen_range(0..self.curve().p()));
                t.push(c / &p + shift * (s / &p));
            } else {
                let e = p.extended_gcd(s);
                t.push((c * e.x).mod_floor(s));
            }
        }
        self.unproject(&self.pic_m.lift(&t)).map(Some)
    }

    /// Generators of `Pic_m^0[p]` as divisor vectors.
    pub fn p_torsion_generators(&self) -> Result<Vec<Vec<i64>>> {
        let p = BigInt::from(self.curve().p());
        let inv = self.pic_m.diagonal();
        let mut out = Vec::new();
        for (i, s) in inv.iter().enumerate() {
            if (s % &p).is_zero() {
                let mut t = vec![BigInt::zero(); inv.len()];
                t[i] = s / &p;
                out.push(self.unproject(&self.pic_m.lift(&t))?);
            }
        }
        Ok(out)
    }

    /// `alpha(D) = (x - T)(D) / h(W)` with `div h = p D`, `h` omm; `None`
    /// when the class of `D` is not `p`-torsion.
    pub fn alpha(&self, v: &[i64]) -> Result<Option<EtaleElem>> {
        let pv: Vec<i64> = v.iter().map(|x| x * self.curve().p() as i64).collect();
        let Some(hw) = self.omm_value_at_w(&pv)? else {
            return Ok(None);
        };
        let d = self.divisor(v)?;
        Ok(Some(crate::descent::eval_x_minus_t(&d).checked_div(&hw)?))
    }
}

/// Basis of `{v : rows v = 0}` over `F_q`.
fn nullspace_mod(mut rows: Vec<Vec<u64>>, ncols: usize, q: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = crate::arith::inv_mod(rows[r][col], q).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % q;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let m = row[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (q - m) * y) % q;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; ncols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (q - rows[i][free]) % q;
            }
            v
        })
        .collect()
}

trait ModFloorI64 {
    fn mod_floor_i64(&self, m: &BigInt) -> i64;
}

impl ModFloorI64 for BigInt {
    fn mod_floor_i64(&self, m: &BigInt) -> i64 {
        use num_integer::Integer;
        let r = self.mod_floor(m);
        debug_assert!(!m.is_zero());
        r.to_i64().expect("reduced exponent fits")
    }
}

#[cfg(test)]
mod tests;
