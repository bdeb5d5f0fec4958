//! Closed points of degree at most 2 on `y^p = f(x)` over `F_q`.

use std::collections::HashMap;

use super::gf::{residue, residues, Fq2, Fq2Elem};
use crate::basefield::FieldSpec;
use crate::curve::{Curve, DivisorComponent};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// Away from `y = 0` and infinity, with the matching divisor component.
    Good(DivisorComponent),
    Ramified,
    /// Above infinity, `z = lim y / x^(deg f / p)`.
    Infinite,
}

/// A Frobenius orbit of `F_{q^2}`-points. `rep` is `(x, y)` for affine
/// points and `(0, z)` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPoint {
    pub degree: usize,
    pub rep: (Fq2Elem, Fq2Elem),
    pub kind: PointKind,
}

/// Shared data for scanning a curve over `F_q` and `F_{q^2}`.
pub struct CurveScan {
    pub curve: Curve,
    pub k: Fq2,
    pub f: Vec<u64>,
    pub c: u64,
    /// `v -> {y : y^p = v}` in `F_{q^2}`.
    roots: HashMap<Fq2Elem, Vec<Fq2Elem>>,
}

impl CurveScan {
    pub fn new(curve: &Curve) -> Result<CurveScan> {
        let FieldSpec::FinitePrime(q) = curve.base() else {
            return Err(Error::UnsupportedBase(format!(
                "point scans over {}",
                curve.base()
            )));
        };
        if (q - 1) % curve.p() as u64 != 0 {
            return Err(Error::BadResidue { q, p: curve.p() });
        }
        let k = Fq2::new(q)?;
        let mut roots: HashMap<Fq2Elem, Vec<Fq2Elem>> = HashMap::new();
        for y in k.elements() {
            roots.entry(k.pow(y, curve.p() as u64)).or_default().push(y);
        }
        Ok(CurveScan {
            curve: curve.clone(),
            k,
            f: residues(curve.f()),
            c: residue(curve.c()),
            roots,
        })
    }

    pub fn q(&self) -> u64 {
        self.k.q()
    }

    /// Solutions of `y^p = v` in `F_{q^2}`.
    pub fn pth_roots(&self, v: Fq2Elem) -> &[Fq2Elem] {
        self.roots.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `#C(F_q)` (`ext = 1`) or `#C(F_{q^2})` (`ext = 2`) on the smooth model.
    pub fn count_points(&self, ext: u32) -> u64 {
        let k = &self.k;
        let inside = |x: &Fq2Elem| ext == 2 || k.is_base(*x);
        let mut n = 0u64;
        for x in k.elements().filter(inside) {
            let v = k.eval(&self.f, x);
            n += if v == k.zero() {
                1
            } else {
                self.pth_roots(v).iter().filter(|y| inside(y)).count() as u64
            };
        }
        n + self
            .pth_roots(k.from_base(self.c))
            .iter()
            .filter(|z| inside(z))
            .count() as u64
    }

    /// All closed points of degree `<= bound` (`bound` in {1, 2}).
    pub fn enumerate_points(&self, bound: usize) -> Result<Vec<ClosedPoint>> {
        if !(1..=2).contains(&bound) {
            return Err(Error::Envelope(format!(
                "degree bound {bound} outside 1..=2"
            )));
        }
        let k = &self.k;
        let orbit_degree =
            |x: Fq2Elem, y: Fq2Elem| if k.is_base(x) && k.is_base(y) { 1 } else { 2 };
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for x in k.elements() {
            let v = k.eval(&self.f, x);
            let ys: Vec<Fq2Elem> = if v == k.zero() {
                vec![k.zero()]
            } else {
                self.pth_roots(v).to_vec()
            };
            for y in ys {
                if !seen.insert((x, y)) {
                    continue;
                }
                seen.insert((k.frob(x), k.frob(y)));
                let degree = orbit_degree(x, y);
                if degree > bound {
                    continue;
                }
                let kind = if v == k.zero() {
                    PointKind::Ramified
                } else {
                    PointKind::Good(self.component(x, y))
                };
                out.push(ClosedPoint {
                    degree,
                    rep: (x, y),
                    kind,
                });
            }
        }
        let mut seen_inf = std::collections::HashSet::new();
        for &z in self.pth_roots(k.from_base(self.c)) {
            if !seen_inf.insert(z) {
                continue;
            }
            seen_inf.insert(k.frob(z));
            let degree = orbit_degree(k.zero(), z);
            if degree <= bound {
                out.push(ClosedPoint {
                    degree,
                    rep: (k.zero(), z),
                    kind: PointKind::Infinite,
                });
            }
        }
        Ok(out)
    }

    /// The component over `F_q` of the orbit of a good point `(x, y)`.
    fn component(&self, x: Fq2Elem, y: Fq2Elem) -> DivisorComponent {
        let k = &self.k;
        let spec = self.curve.base();
        let elem = |v: u64| spec.from_i64(v as i64);
        let (xb, yb) = (k.frob(x), k.frob(y));
        // Conjugate pairs give quadratics with base-field coefficients.
        let quad = |u: Fq2Elem, ub: Fq2Elem| {
            let s = k.add(u, ub);
            let t = k.mul(u, ub);
            Poly::new(
                spec,
                vec![elem(t.a), elem((k.q() - s.a) % k.q()), spec.one()],
            )
        };
        if k.is_base(x) {
            let m = if k.is_base(y) {
                Poly::new(spec, vec![elem((k.q() - y.a) % k.q()), spec.one()])
            } else {
                quad(y, yb)
            };
            DivisorComponent::Fiber { r: elem(x.a), m }
        } else {
            let slope = k.mul(
                k.sub(y, yb),
                k.inv(k.sub(x, xb)).expect("distinct conjugates"),
            );
            let b0 = k.sub(y, k.mul(slope, x));
            debug_assert!(k.is_base(slope) && k.is_base(b0));
            DivisorComponent::Horizontal {
                a: quad(x, xb),
                b: Poly::new(spec, vec![elem(b0.a), elem(slope.a)]),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(q: u64, f: &[i64]) -> CurveScan {
        let k = FieldSpec::FinitePrime(q);
        let c = Curve::new(2, Poly::from_i64s(k, f), k.one()).unwrap();
        CurveScan::new(&c).unwrap()
    }

    /// Affine count by brute force over pairs `(x, y)` in `F_q^2`.
    fn brute_affine(q: u64, f: &[i64]) -> u64 {
        let mut n = 0;
        for x in 0..q as i64 {
            let fx = f
                .iter()
                .rev()
                .fold(0i64, |acc, c| (acc * x + c).rem_euclid(q as i64));
            n += (0..q as i64)
                .filter(|y| (y * y - fx).rem_euclid(q as i64) == 0)
                .count() as u64;
        }
        n
    }

    #[test]
    fn genus2_over_f5() {
        let f = [1, 0, 1, 0, 1, 0, 1];
        let s = scan(5, &f);
        // f(x) for x = 0..4 is 1, 4, 85, 820, 4369 = 1, 4, 0, 0, 4 mod 5.
        assert_eq!(brute_affine(5, &f), 8);
        assert_eq!(s.count_points(1), 8 + 2);
        let pts = s.enumerate_points(1).unwrap();
        assert_eq!(pts.len(), 10);
        assert_eq!(
            pts.iter().filter(|p| p.kind == PointKind::Ramified).count(),
            2
        );
        assert_eq!(
            pts.iter().filter(|p| p.kind == PointKind::Infinite).count(),
            2
        );
        let deg2 = s.enumerate_points(2).unwrap();
        let n2: usize = deg2.iter().map(|p| p.degree).sum();
        assert_eq!(n2 as u64, s.count_points(2));
    }

    #[test]
    fn components_validate() {
        let s = scan(7, &[3, 1, 0, 0, 0, 0, 1]);
        for pt in s.enumerate_points(2).unwrap() {
            if let PointKind::Good(comp) = &pt.kind {
                comp.validate(&s.curve).unwrap();
                assert_eq!(comp.degree(), pt.degree);
            }
        }
    }
}
