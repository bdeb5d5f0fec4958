//! Integer lattices in echelon form with provenance, and finite abelian
//! groups `Z^n / lattice` with Smith normal form coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer combination of source relations.
pub type Combination = BTreeMap<usize, BigInt>;

fn axpy(acc: &mut Combination, k: &BigInt, x: &Combination, m: Option<&BigInt>) {
    if k.is_zero() {
        return;
    }
    for (i, v) in x {
        let e = acc.entry(*i).or_insert_with(BigInt::zero);
        *e += k * v;
        if let Some(m) = m {
            *e = e.mod_floor(m);
        }
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    v: Vec<BigInt>,
    src: Combination,
}

impl Row {
    /// `a self + b other`.
    fn combine(&self, a: &BigInt, other: &Row, b: &BigInt, m: Option<&BigInt>) -> Row {
        let v = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(x, y)| a * x + b * y)
            .collect();
        let mut src = Combination::new();
        axpy(&mut src, a, &self.src, m);
        axpy(&mut src, b, &other.src, m);
        Row { v, src }
    }

    fn sub_multiple(&mut self, k: &BigInt, other: &Row, m: Option<&BigInt>) {
        if k.is_zero() {
            return;
        }
        for (x, y) in self.v.iter_mut().zip(&other.v) {
            *x -= k * y;
        }
        axpy(&mut self.src, &-k, &other.src, m);
    }
}

/// A sublattice of `Z^n` kept as upper-triangular rows indexed by pivot
/// column, each remembering which inserted relations it is made of.
#[derive(Clone, Debug)]
pub struct Lattice {
    ncols: usize,
    rows: Vec<Option<Row>>,
    modulus: Option<BigInt>,
}

impl Lattice {
    pub fn new(ncols: usize) -> Lattice {
        Lattice {
            ncols,
            rows: vec![None; ncols],
            modulus: None,
        }
    }

    /// Track source coefficients only modulo `m`; `m = 1` drops provenance.
    pub fn with_source_modulus(ncols: usize, m: BigInt) -> Lattice {
        Lattice {
            modulus: Some(m),
            ..Lattice::new(ncols)
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ncols
    }

    /// Index of the lattice in `Z^n` when of full rank.
    pub fn determinant(&self) -> Option<BigInt> {
        self.rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .map(|r| r.v[r.v.iter().position(|x| !x.is_zero()).unwrap()].clone())
            })
            .product()
    }

    /// Add relation number `source`; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[i64], source: usize) -> bool {
        let m = self.modulus.clone();
        let m = m.as_ref();
        let mut src = Combination::new();
        axpy(
            &mut src,
            &BigInt::one(),
            &Combination::from([(source, BigInt::one())]),
            m,
        );
        let mut row = Row {
            v: v.iter().map(|&x| BigInt::from(x)).collect(),
            src,
        };
        let mut grew = false;
        for col in 0..self.ncols {
            if row.v[col].is_zero() {
                continue;
            }
            let Some(b) = self.rows[col].take() else {
                if row.v[col].is_negative() {
                    row = row.combine(&-BigInt::one(), &row, &BigInt::zero(), m);
                }
                self.rows[col] = Some(row);
                grew = true;
                break;
            };
            let (x, y) = (&b.v[col], &row.v[col]);
            if (y % x).is_zero() {
                let k = y / x;
                row.sub_multiple(&k, &b, m);
                self.rows[col] = Some(b);
                continue;
            }
            let e = x.extended_gcd(y);
            let (s, t) = (e.x, e.y);
            let new_b = b.combine(&s, &row, &t, m);
            let new_row = row.combine(&(x / &e.gcd), &b, &-(y / &e.gcd), m);
            self.rows[col] = Some(if new_b.v[col].is_negative() {
                new_b.combine(&-BigInt::one(), &new_b, &BigInt::zero(), m)
            } else {
                new_b
            });
            row = new_row;
            grew = true;
        }
        if grew {
            self.hermite_reduce();
        }
        grew
    }

    /// Reduce entries above each pivot into `[0, pivot)`.
    fn hermite_reduce(&mut self) {
        let m = self.modulus.clone();
        for j in 0..self.ncols {
            let Some(pivot_row) = self.rows[j].clone() else {
                continue;
            };
            let d = pivot_row.v[j].clone();
            for i in 0..j {
                if let Some(row) = self.rows[i].as_mut() {
                    let k = row.v[j].div_floor(&d);
                    row.sub_multiple(&k, &pivot_row, m.as_ref());
                }
            }
        }
    }

    fn diag(&self, j: usize) -> &BigInt {
        &self.rows[j].as_ref().expect("full rank").v[j]
    }
}

/// A finite abelian group `Z^n / lattice`, for a full-rank Hermite-reduced
/// lattice. Columns whose pivot is 1 are eliminated, the remaining block is
/// put in Smith normal form.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    lattice: Lattice,
    /// Columns with pivot `> 1`.
    block: Vec<usize>,
    invariants: Vec<BigInt>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

/// A reduced relation: the canonical block vector and the lattice
/// combination that was subtracted.
struct Reduction {
    block: Vec<BigInt>,
    coeffs: Vec<BigInt>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat_vec(x: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| x.iter().zip(m).map(|(xi, row)| xi * &row[j]).sum())
        .collect()
}

type Matrix = Vec<Vec<BigInt>>;

/// Rows `(i, j) <- [[c0, c1], [c2, c3]] (rows i, j)`.
fn row_op(m: &mut Matrix, i: usize, j: usize, c: [&BigInt; 4]) {
    for k in 0..m[0].len() {
        let (a, b) = (m[i][k].clone(), m[j][k].clone());
        m[i][k] = c[0] * &a + c[1] * &b;
        m[j][k] = c[2] * &a + c[3] * &b;
    }
}

/// Columns `(i, j) <- (c0 col_i + c1 col_j, c2 col_i + c3 col_j)`.
fn col_op(m: &mut Matrix, i: usize, j: usize, c: [&BigInt; 4]) {
    for row in m.iter_mut() {
        let (a, b) = (row[i].clone(), row[j].clone());
        row[i] = c[0] * &a + c[1] * &b;
        row[j] = c[2] * &a + c[3] * &b;
    }
}

/// Smith normal form `U A V = diag(s)` of a square nonsingular matrix,
/// returning `(s, U, V, V^-1)`.
/// Unimodular `[a, b, c, d]` sending `(x, y)` to `(a x + b y, c x + d y)`
/// with second entry zero.
fn elimination(x: &BigInt, y: &BigInt) -> [BigInt; 4] {
    if (y % x).is_zero() {
        return [BigInt::one(), BigInt::zero(), -(y / x), BigInt::one()];
    }
    let e = x.extended_gcd(y);
    [e.x, e.y, -(y / &e.gcd), x / &e.gcd]
}

fn smith(a: &[Vec<BigInt>]) -> (Vec<BigInt>, Matrix, Matrix, Matrix) {
    let n = a.len();
    let mut m = a.to_vec();
    let mut u = identity(n);
    let mut v = identity(n);
    let mut v_inv = identity(n);
    let one = BigInt::one();
    let zero = BigInt::zero();
    for k in 0..n {
        loop {
            let (pi, pj) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].abs())
                .expect("nonsingular");
            m.swap(k, pi);
            u.swap(k, pi);
            for row in m.iter_mut().chain(v.iter_mut()) {
                row.swap(k, pj);
            }
            v_inv.swap(k, pj);
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let c = elimination(&m[k][k], &m[i][k]);
                let c = [&c[0], &c[1], &c[2], &c[3]];
                row_op(&mut m, k, i, c);
                row_op(&mut u, k, i, c);
                clean = false;
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let c = elimination(&m[k][k], &m[k][j]);
                let inv = [c[3].clone(), -&c[2], -&c[1], c[0].clone()];
                let c = [&c[0], &c[1], &c[2], &c[3]];
                col_op(&mut m, k, j, c);
                col_op(&mut v, k, j, c);
                row_op(&mut v_inv, k, j, [&inv[0], &inv[1], &inv[2], &inv[3]]);
                clean = false;
            }
            if !clean {
                continue;
            }
            let d = m[k][k].clone();
            match (k + 1..n).find(|&i| (k + 1..n).any(|j| !(&m[i][j] % &d).is_zero())) {
                Some(i) => {
                    row_op(&mut m, k, i, [&one, &one, &zero, &one]);
                    row_op(&mut u, k, i, [&one, &one, &zero, &one]);
                }
                None => break,
            }
        }
        if m[k][k].is_negative() {
            for x in m[k].iter_mut().chain(u[k].iter_mut()) {
                *x = -&*x;
            }
        }
    }
    let s = (0..n).map(|i| m[i][i].clone()).collect();
    (s, u, v, v_inv)
}

impl FiniteGroup {
    pub fn new(lattice: Lattice) -> Result<FiniteGroup> {
        if !lattice.is_full_rank() {
            return Err(Error::PrecisionExceeded(format!(
                "relation lattice has rank {} < {}",
                lattice.rank(),
                lattice.ncols()
            )));
        }
        let block: Vec<usize> = (0..lattice.ncols)
            .filter(|&j| !lattice.diag(j).is_one())
            .collect();
        let rel: Vec<Vec<BigInt>> = block
            .iter()
            .map(|&j| {
                let row = &lattice.rows[j].as_ref().unwrap().v;
                block.iter().map(|&l| row[l].clone()).collect()
            })
            .collect();
        let (invariants, u, v, v_inv) = smith(&rel);
        Ok(FiniteGroup {
            lattice,
            block,
            invariants,
            u,
            v,
            v_inv,
        })
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    /// Invariant factors `> 1`.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.invariants
            .iter()
            .filter(|s| !s.is_one())
            .cloned()
            .collect()
    }

    /// Diagonal of the Smith form, aligned with `coords` and `lift`.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.invariants
    }

    /// `|G[n]|`.
    pub fn torsion_count(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        self.invariants.iter().map(|s| s.gcd(&n)).product()
    }

    fn reduce(&self, x: &[i64]) -> Reduction {
        let mut v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        let mut coeffs = vec![BigInt::zero(); self.lattice.ncols];
        for j in 0..self.lattice.ncols {
            if self.block.contains(&j) || v[j].is_zero() {
                continue;
            }
            let row = self.lattice.rows[j].as_ref().unwrap();
            let k = v[j].clone();
            for (a, b) in v.iter_mut().zip(&row.v) {
                *a -= &k * b;
            }
            coeffs[j] = k;
        }
        Reduction {
            block: self.block.iter().map(|&j| v[j].clone()).collect(),
            coeffs,
        }
    }

    /// Smith coordinates of the class of `x`, each in `[0, s_i)`.
    pub fn coords(&self, x: &[i64]) -> Vec<BigInt> {
        let r = self.reduce(x);
        mat_vec(&r.block, &self.v)
            .iter()
            .zip(&self.invariants)
            .map(|(c, s)| c.mod_floor(s))
            .collect()
    }

    /// A vector of `Z^n` in the class with the given coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let block = mat_vec(coords, &self.v_inv);
        let mut out = vec![BigInt::zero(); self.lattice.ncols];
        for (j, b) in self.block.iter().zip(block) {
            out[*j] = b;
        }
        out
    }

    /// For `x` in the lattice, its expression in the inserted relations.
    pub fn principal_combination(&self, x: &[i64]) -> Option<Combination> {
        let r = self.reduce(x);
        let uv = mat_vec(&r.block, &self.v);
        let mut y = Vec::with_capacity(uv.len());
        for (c, s) in uv.iter().zip(&self.invariants) {
            if !(c % s).is_zero() {
                return None;
            }
            y.push(c / s);
        }
        let block_coeffs = mat_vec(&y, &self.u);
        let m = self.lattice.modulus.as_ref();
        let mut out = Combination::new();
        for (j, k) in r.coeffs.iter().enumerate() {
            if !k.is_zero() {
                axpy(&mut out, k, &self.lattice.rows[j].as_ref().unwrap().src, m);
            }
        }
        for (j, k) in self.block.iter().zip(&block_coeffs) {
            axpy(&mut out, k, &self.lattice.rows[*j].as_ref().unwrap().src, m);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests;
