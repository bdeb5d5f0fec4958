use super::*;
use crate::basefield::FieldSpec;

fn curve(q: u64, p: u32, f: &[i64], c: i64) -> Curve {
    let k = FieldSpec::FinitePrime(q);
    Curve::new(p, Poly::from_i64s(k, f), k.from_i64(c)).unwrap()
}

fn orders(c: &Curve) -> (BigInt, BigInt, i64, u64) {
    let m = PicardModel::build(c, 1, SearchBudget::default()).unwrap();
    let scan = m.scan();
    let q = scan.q();
    let j = jacobian_order(c.genus(), q, scan.count_points(1), scan.count_points(2));
    eprintln!(
        "{c}: stats {:?} pic0 {:?} picm {:?}",
        m.search_stats(),
        m.pic0().invariants(),
        m.pic_m().invariants()
    );
    (m.pic0().order(), m.pic_m().order(), j, torus_order(c, q))
}

#[test]
fn genus2_over_f5() {
    let c = curve(5, 2, &[1, 0, 1, 0, 1, 0, 1], 1);
    let (p0, pm, j, t) = orders(&c);
    assert_eq!(p0, BigInt::from(j));
    assert_eq!(pm, BigInt::from(j) * BigInt::from(t));
}

#[test]
fn sweep_orders() {
    let cases: &[(u64, u32, &[i64], i64)] = &[
        (5, 2, &[1, 0, 1, 0, 1, 0, 1], 1),
        (5, 2, &[1, 1, 0, 0, 0, 0, 1], 2),
        (7, 2, &[-1, 0, 0, 0, 0, 0, 1], 1),
        (7, 3, &[-2, 0, 0, 1], 1),
        (7, 3, &[1, 1, 0, 1], 2),
        (13, 3, &[1, 0, 0, 1], 1),
        (7, 3, &[6, 3, 6, 0, 4, 1, 1], 1),
        (13, 3, &[4, 5, 8, 5, 5, 11, 1], 1),
        (11, 2, &[1, 2, 0, 3, 0, 0, 1], 1),
        (13, 2, &[3, 0, 1, 0, 0, 1, 1], 2),
        (7, 2, &[1, 0, 3, 1, 2], 1),
    ];
    for &(q, p, f, c) in cases {
        let t0 = std::time::Instant::now();
        let cv = curve(q, p, f, c);
        let (p0, pm, j, t) = orders(&cv);
        eprintln!("  {p0} {pm} {j} {t} {:?}", t0.elapsed());
        assert_eq!(p0, BigInt::from(j));
        assert_eq!(pm, BigInt::from(j) * BigInt::from(t));
    }
}

// On x^4 - 1 over F_5 only (0, 2) and (0, 3) are rational good points; separating them
// needs a function with a double zero.
#[test]
fn two_rational_points() {
    for (q, f) in [(5, &[-1i64, 0, 0, 0, 1][..]), (7, &[0, -6, 11, -6, 1][..])] {
        let c = curve(q, 2, f, 1);
        let (p0, pm, j, t) = orders(&c);
        assert_eq!(p0, BigInt::from(j));
        assert_eq!(pm, BigInt::from(j) * BigInt::from(t));
    }
}
