//! Arithmetic in `F_q` and `F_{q^2} = F_q[s]/(s^2 - nu)` for odd prime `q`.

use crate::arith::{inv_mod, pow_mod};
use crate::basefield::FieldElem;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `a + b s` with `s^2 = nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq2Elem {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq2 {
    q: u64,
    nu: u64,
}

impl Fq2 {
    pub fn new(q: u64) -> Result<Fq2> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::Envelope(format!(
                "F_q^2 model needs an odd prime q, got {q}"
            )));
        }
        let nu = (2..q)
            .find(|&n| pow_mod(n, (q - 1) / 2, q) == q - 1)
            .expect("odd prime has a non-residue");
        Ok(Fq2 { q, nu })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> Fq2Elem {
        Fq2Elem { a: 0, b: 0 }
    }

    pub fn one(&self) -> Fq2Elem {
        Fq2Elem { a: 1, b: 0 }
    }

    pub fn from_base(&self, a: u64) -> Fq2Elem {
        Fq2Elem {
            a: a % self.q,
            b: 0,
        }
    }

    pub fn is_base(&self, x: Fq2Elem) -> bool {
        x.b == 0
    }

    pub fn add(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: (x.a + y.a) % self.q,
            b: (x.b + y.b) % self.q,
        }
    }

    pub fn sub(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: (x.a + self.q - y.a) % self.q,
            b: (x.b + self.q - y.b) % self.q,
        }
    }

    pub fn neg(&self, x: Fq2Elem) -> Fq2Elem {
        self.sub(self.zero(), x)
    }

    pub fn mul(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let q = self.q;
        Fq2Elem {
            a: (x.a * y.a + self.nu * (x.b * y.b % q)) % q,
            b: (x.a * y.b + x.b * y.a) % q,
        }
    }

    /// The Frobenius `x -> x^q`.
    pub fn frob(&self, x: Fq2Elem) -> Fq2Elem {
        Fq2Elem {
            a: x.a,
            b: (self.q - x.b) % self.q,
        }
    }

    pub fn inv(&self, x: Fq2Elem) -> Option<Fq2Elem> {
        let q = self.q;
        let norm = (x.a * x.a % q + q - self.nu * (x.b * x.b % q) % q) % q;
        let ni = inv_mod(norm, q)?;
        Some(Fq2Elem {
            a: x.a * ni % q,
            b: (q - x.b) % q * ni % q,
        })
    }

    pub fn pow(&self, mut x: Fq2Elem, mut e: u64) -> Fq2Elem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// All `q^2` elements, base field first.
    pub fn elements(&self) -> impl Iterator<Item = Fq2Elem> + '_ {
        (0..self.q).flat_map(move |b| (0..self.q).map(move |a| Fq2Elem { a, b }))
    }

    /// Evaluate a polynomial over `F_q` at `x`.
    pub fn eval(&self, f: &[u64], x: Fq2Elem) -> Fq2Elem {
        f.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(self.mul(acc, x), self.from_base(c))
        })
    }
}

/// Coefficients of a polynomial over `F_q` as residues.
pub fn residues(f: &Poly) -> Vec<u64> {
    f.coeffs()
        .iter()
        .map(|c| c.as_residue().expect("polynomial over F_q"))
        .collect()
}

pub fn residue(c: &FieldElem) -> u64 {
    c.as_residue().expect("element of F_q")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_spot_checks() {
        let k = Fq2::new(7).unwrap();
        let nz: Vec<Fq2Elem> = k.elements().filter(|x| *x != k.zero()).collect();
        assert_eq!(nz.len(), 48);
        for &x in &nz {
            assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
            assert_eq!(k.pow(x, 48), k.one());
            assert_eq!(k.pow(x, 7), k.frob(x));
        }
        assert!(Fq2::new(2).is_err());
    }
}
