//! The module `M` of `mu_p`-valued maps on the roots `Omega` of `f` with
//! `prod eta(w)^(a_w) = 1`, written additively over `F_p`, and the orders of
//! `Gamma / chi(L*)` and `Gamma / chi(L*) iota(k*)` over `F_q`.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::gf::residue;
use crate::arith::{pow_mod, prime_factors_u64};
use crate::basefield::{FieldElem, FieldSpec};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::poly::{factor_mod_q, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MModule {
    p: u32,
    /// `a_w` for each root.
    weights: Vec<u32>,
    /// Frobenius as a permutation of the roots.
    sigma: Vec<usize>,
    /// `(degree, multiplicity)` of each Frobenius orbit.
    orbits: Vec<(usize, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinvariantOrders {
    pub h1m: u64,
    pub h1m_mu: u64,
    pub image_order: u64,
}

type Vector = Vec<u32>;

/// Rank over `F_p` of a list of vectors.
fn rank_mod_p(vectors: &[Vector], p: u32) -> usize {
    let mut rows: Vec<Vector> = vectors.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col] as u64, p as u64 - 2, p as u64) as u32;
        let prow: Vector = rows[rank].iter().map(|v| v * inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] % p != 0 {
                let factor = row[col];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        rows[rank] = prow;
        rank += 1;
    }
    rank
}

impl MModule {
    /// Orbit structure read off the factorization of `f` over `F_q`.
    pub fn from_curve(curve: &Curve) -> Result<MModule> {
        let FieldSpec::FinitePrime(q) = curve.base() else {
            return Err(Error::UnsupportedBase(format!("M over {}", curve.base())));
        };
        let p = curve.p();
        if (q - 1) % p as u64 != 0 {
            return Err(Error::BadResidue { q, p });
        }
        let mut orbits: Vec<(usize, u32)> = factor_mod_q(curve.f())
            .into_iter()
            .map(|(g, a)| (g.deg(), a))
            .collect();
        orbits.sort();
        Ok(MModule::from_orbits(p, &orbits))
    }

    pub fn from_orbits(p: u32, orbits: &[(usize, u32)]) -> MModule {
        let mut weights = Vec::new();
        let mut sigma = Vec::new();
        for &(e, a) in orbits {
            let start = weights.len();
            for i in 0..e {
                weights.push(a);
                sigma.push(start + (i + 1) % e);
            }
        }
        MModule {
            p,
            weights,
            sigma,
            orbits: orbits.to_vec(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `|Omega|`.
    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn orbits(&self) -> &[(usize, u32)] {
        &self.orbits
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        x.iter().zip(&self.weights).map(|(v, a)| v * a).sum::<u32>() % self.p == 0
    }

    fn act(&self, x: &[u32]) -> Vector {
        let mut out = vec![0; x.len()];
        for (i, &j) in self.sigma.iter().enumerate() {
            out[j] = x[i];
        }
        out
    }

    fn sigma_minus_one(&self, x: &[u32]) -> Vector {
        let p = self.p;
        self.act(x)
            .iter()
            .zip(x)
            .map(|(a, b)| (a + p - b) % p)
            .collect()
    }

    fn diagonal(&self) -> Vector {
        vec![1; self.d()]
    }

    /// A basis of `M`: `e_i - a_i a_0^-1 e_0` for `i > 0`.
    fn basis(&self) -> Vec<Vector> {
        let p = self.p;
        let inv0 = pow_mod(self.weights[0] as u64, p as u64 - 2, p as u64) as u32;
        (1..self.d())
            .map(|i| {
                let mut v = vec![0; self.d()];
                v[i] = 1;
                v[0] = (p - self.weights[i] * inv0 % p) % p;
                v
            })
            .collect()
    }

    /// Every element of `F_p^Omega` in lexicographic order.
    fn all_vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        let (p, d) = (self.p as u64, self.d() as u32);
        (0..p.pow(d)).map(move |mut code| {
            (0..d)
                .map(|_| {
                    let v = (code % p) as u32;
                    code /= p;
                    v
                })
                .collect()
        })
    }

    /// `|M|` by enumeration.
    pub fn order_by_count(&self) -> u64 {
        self.all_vectors().filter(|x| self.contains(x)).count() as u64
    }

    /// `|M^sigma|`, equal to `|M / (sigma - 1) M|` for a finite module.
    pub fn fixed_points(&self) -> u64 {
        self.all_vectors()
            .filter(|x| self.contains(x) && self.act(x) == *x)
            .count() as u64
    }

    /// `|(M / mu_p)^sigma|`: classes `x + mu_p` with `sigma x - x` in `mu_p`.
    pub fn fixed_points_mod_mu(&self) -> u64 {
        let count = self
            .all_vectors()
            .filter(|x| self.contains(x))
            .filter(|x| {
                let s = self.sigma_minus_one(x);
                s.iter().all(|v| *v == s[0])
            })
            .count() as u64;
        count / self.p as u64
    }

    /// An `eta` with `prod eta(w)^(a_w) = zeta`, i.e. weighted sum 1.
    pub fn norm_preimage(&self) -> Option<Vector> {
        let p = self.p;
        self.all_vectors()
            .find(|x| x.iter().zip(&self.weights).map(|(v, a)| v * a).sum::<u32>() % p == 1)
    }

    pub fn coinvariant_orders(&self) -> CoinvariantOrders {
        let p = self.p as u64;
        let basis = self.basis();
        let dim_m = basis.len() as u32;
        let image: Vec<Vector> = basis.iter().map(|b| self.sigma_minus_one(b)).collect();
        let r_img = rank_mod_p(&image, self.p) as u32;
        let mut with_mu = image.clone();
        with_mu.push(self.diagonal());
        let r_mu = rank_mod_p(&with_mu, self.p) as u32;
        let mut all = with_mu.clone();
        all.extend(basis.iter().cloned());
        let r_all = rank_mod_p(&all, self.p) as u32;
        CoinvariantOrders {
            h1m: p.pow(dim_m - r_img),
            h1m_mu: p.pow(dim_m - r_mu),
            image_order: p.pow(r_all - r_mu),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCounts {
    /// `|Gamma / chi(L*)|`.
    pub g_order: u64,
    /// `|Gamma / chi(L*) iota(k*)|`.
    pub gi_order: u64,
}

/// One factor field `F_q[x]/g` with a generator `gamma` of its unit group,
/// `N(gamma) = h^t` and `h = (gamma^((q^e - 1)/(q - 1)))^v` for the fixed
/// primitive root `h` of `F_q`.
struct FactorLog {
    order: u64,
    weight: u64,
    t: u64,
    v: u64,
}

fn primitive_root(q: u64) -> u64 {
    let primes = prime_factors_u64(q - 1);
    (2..q)
        .find(|&g| primes.iter().all(|l| pow_mod(g, (q - 1) / l, q) != 1))
        .unwrap_or(1)
}

fn factor_log(g: &Poly, weight: u32, q: u64, h: u64) -> Result<FactorLog> {
    let spec = g.spec();
    let e = g.deg() as u32;
    let order = q
        .checked_pow(e)
        .ok_or_else(|| Error::TooLarge(format!("q^{e}")))?
        - 1;
    let primes = prime_factors_u64(order);
    let pw = |x: &Poly, n: u64| x.pow_mod(&BigUint::from(n), g);
    let gen = (0..q.pow(e))
        .map(|mut code| {
            let cs: Vec<FieldElem> = (0..e)
                .map(|_| {
                    let c = spec.from_i64((code % q) as i64);
                    code /= q;
                    c
                })
                .collect();
            Poly::new(spec, cs)
        })
        .find(|x| !x.is_zero() && primes.iter().all(|l| !pw(x, order / l).is_one()))
        .expect("finite field has a generator");
    let norm = residue(&pw(&gen, order / (q - 1)).coeff(0));
    let dlog = |target: u64| (0..q - 1).find(|&t| pow_mod(h, t, q) == target);
    let t = dlog(norm).expect("norm is a unit");
    let sub = pw(&gen, order / (q - 1));
    let v = (0..q - 1)
        .find(|&v| pw(&sub, v) == Poly::constant(spec.from_i64(h as i64)))
        .expect("F_q* sits inside every factor field");
    Ok(FactorLog {
        order,
        weight: weight as u64,
        t,
        v,
    })
}

/// Orders of the two quotients of `Gamma`, from the cyclic structure of the
/// factor fields of `L` (discrete logarithms with respect to generators).
pub fn gamma_class_count(curve: &Curve) -> Result<GammaCounts> {
    let FieldSpec::FinitePrime(q) = curve.base() else {
        return Err(Error::UnsupportedBase(format!(
            "Gamma counts over {}",
            curve.base()
        )));
    };
    let p = curve.p() as u64;
    if (q - 1) % p != 0 {
        return Err(Error::BadResidue { q, p: p as u32 });
    }
    let big_q = q - 1;
    let h = primitive_root(q);
    let logs: Vec<FactorLog> = factor_mod_q(curve.f())
        .iter()
        .map(|(g, a)| factor_log(&g.monic(), *a, q, h))
        .collect::<Result<_>>()?;
    if logs.len() > 8 {
        return Err(Error::TooLarge(format!("{} factor fields", logs.len())));
    }
    let r = logs.len() as u32;
    let units: u128 = logs.iter().map(|l| l.order as u128).product();
    // |Gamma| = |ker nu| for nu(x, y) = sum a_i t_i x_i - p y on L* x k*.
    let gcd_nu = logs.iter().fold(num_integer::gcd(big_q, p), |g, l| {
        num_integer::gcd(g, l.weight * l.t % big_q)
    });
    let gamma_order = units * gcd_nu as u128;
    // Coset choices k in (Z/p)^r, as offsets (order_i / p) k_i.
    let choices: Vec<Vec<u64>> = (0..p.pow(r))
        .map(|mut code| {
            (0..r)
                .map(|_| {
                    let k = code % p;
                    code /= p;
                    k
                })
                .collect()
        })
        .collect();
    let weighted = |z: &[u64]| -> u64 {
        logs.iter()
            .zip(z)
            .map(|(l, zi)| (l.weight * l.t % big_q) * (zi % big_q) % big_q)
            .sum::<u64>()
            % big_q
    };
    let offset =
        |k: &[u64]| -> Vec<u64> { logs.iter().zip(k).map(|(l, ki)| l.order / p * ki).collect() };
    let ker_chi = choices.iter().filter(|k| weighted(&offset(k)) == 0).count() as u128;
    let chi_order = units / ker_chi;
    let w = curve.y_weight() as u64;
    let mut meets = 0u64;
    for y in 0..big_q {
        let target: Vec<u64> = logs
            .iter()
            .map(|l| (l.order / big_q) * l.v % l.order * y % l.order)
            .collect();
        if target.iter().any(|t| t % p != 0) {
            continue;
        }
        let base: Vec<u64> = target.iter().map(|t| t / p).collect();
        let want = w * y % big_q;
        let hit = choices.iter().any(|k| {
            let z: Vec<u64> = base.iter().zip(offset(k)).map(|(b, o)| b + o).collect();
            weighted(&z) == want
        });
        if hit {
            meets += 1;
        }
    }
    let chi_iota_order = chi_order * big_q as u128 / meets as u128;
    Ok(GammaCounts {
        g_order: (gamma_order / chi_order) as u64,
        gi_order: (gamma_order / chi_iota_order) as u64,
    })
}

/// The same orders by listing every unit of `L`; `None` above `limit` units.
pub fn gamma_class_count_brute(curve: &Curve, limit: u64) -> Result<Option<GammaCounts>> {
    let FieldSpec::FinitePrime(q) = curve.base() else {
        return Err(Error::UnsupportedBase(format!(
            "Gamma counts over {}",
            curve.base()
        )));
    };
    let alg = curve.algebra();
    let dim = alg.dim() as u32;
    let size = match q.checked_pow(dim) {
        Some(s) if s <= limit => s,
        _ => return Ok(None),
    };
    let spec = curve.base();
    let p = curve.p() as i64;
    let mut root_count = vec![0u64; q as usize];
    for n in 1..q {
        root_count[pow_mod(n, p as u64, q) as usize] += 1;
    }
    let mut gamma = 0u64;
    let mut chi = HashSet::new();
    for code in 0..size {
        let mut c = code;
        let cs: Vec<FieldElem> = (0..dim)
            .map(|_| {
                let v = spec.from_i64((c % q) as i64);
                c /= q;
                v
            })
            .collect();
        let theta = alg.elem(Poly::new(spec, cs));
        if !theta.is_invertible() {
            continue;
        }
        let norm = theta.weighted_norm()?;
        gamma += root_count[residue(&norm) as usize];
        chi.insert((theta.pow(p)?.rep().clone(), residue(&norm)));
    }
    let w = curve.y_weight() as i64;
    let meets = (1..q)
        .filter(|&x| {
            let xe = spec.from_i64(x as i64);
            let n = residue(&xe.pow(w).unwrap());
            chi.contains(&(Poly::constant(xe), n))
        })
        .count() as u64;
    let chi_order = chi.len() as u64;
    let chi_iota = chi_order * (q - 1) / meets;
    Ok(Some(GammaCounts {
        g_order: gamma / chi_order,
        gi_order: gamma / chi_iota,
    }))
}

#[cfg(test)]
mod tests;
