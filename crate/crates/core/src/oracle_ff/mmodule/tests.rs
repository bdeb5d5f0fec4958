use super::*;
use crate::poly::is_irreducible_mod_q;

fn curve(q: u64, p: u32, f: &[i64]) -> Curve {
    let k = FieldSpec::FinitePrime(q);
    Curve::new(p, Poly::from_i64s(k, f), k.one()).unwrap()
}

#[test]
fn orbit_type_1_1_2_2_over_f5() {
    // x^6 + x^4 + x^2 + 1 = (x - 2)(x - 3)(x^2 + 2)(x^2 + 3) mod 5.
    let c = curve(5, 2, &[1, 0, 1, 0, 1, 0, 1]);
    let m = MModule::from_curve(&c).unwrap();
    assert_eq!(m.orbits(), &[(1, 1), (1, 1), (2, 1), (2, 1)]);
    assert_eq!(m.order_by_count(), 32);
    // Invariant maps are constant on the 4 orbits, with product 1.
    assert_eq!(m.fixed_points(), 16 / 2);
    let o = m.coinvariant_orders();
    assert_eq!(
        o,
        CoinvariantOrders {
            h1m: 8,
            h1m_mu: 4,
            image_order: 4
        }
    );
    let g = gamma_class_count(&c).unwrap();
    assert_eq!(
        g,
        GammaCounts {
            g_order: 8,
            gi_order: 4
        }
    );
    assert_eq!(gamma_class_count_brute(&c, 20_000).unwrap(), Some(g));
}

#[test]
fn split_and_single_orbit() {
    // x^6 - 1 has the six roots F_7^*.
    let m = MModule::from_curve(&curve(7, 2, &[-1, 0, 0, 0, 0, 0, 1])).unwrap();
    assert_eq!(m.coinvariant_orders().h1m, 32);
    assert_eq!(m.fixed_points_mod_mu(), 16);
    let k = FieldSpec::FinitePrime(5);
    let sextic = (0..5i64.pow(6))
        .map(|code| {
            let cs: Vec<i64> = (0..6).map(|i| code / 5i64.pow(i) % 5).chain([1]).collect();
            cs
        })
        .find(|cs| is_irreducible_mod_q(&Poly::from_i64s(k, cs)))
        .unwrap();
    let c = curve(5, 2, &sextic);
    let m = MModule::from_curve(&c).unwrap();
    assert_eq!(m.orbits(), &[(6, 1)]);
    // Constant maps +-1 both satisfy eta^6 = 1.
    assert_eq!(m.coinvariant_orders().h1m, 2);
    assert_eq!(gamma_class_count(&c).unwrap().g_order, 2);
}

#[test]
fn cubic_over_f7() {
    // 2 is not a cube mod 7, so x^3 - 2 is one orbit of size 3.
    let c = curve(7, 3, &[-2, 0, 0, 1]);
    let m = MModule::from_curve(&c).unwrap();
    assert_eq!(m.order_by_count(), 9);
    assert_eq!(m.coinvariant_orders().h1m, 3);
    assert_eq!(m.norm_preimage().map(|x| m.contains(&x)), Some(false));
    let g = gamma_class_count(&c).unwrap();
    assert_eq!(g.g_order, 3);
    assert_eq!(gamma_class_count_brute(&c, 20_000).unwrap(), Some(g));
}

#[test]
fn rejects_bad_residue() {
    let k = FieldSpec::FinitePrime(7);
    let c = Curve::new(2, Poly::from_i64s(k, &[1, 0, 0, 1, 0, 0, 1]), k.one()).unwrap();
    assert!(MModule::from_curve(&c).is_ok());
    let alg = crate::etale::EtaleAlgebra::new(
        3,
        Poly::from_i64s(FieldSpec::FinitePrime(5), &[1, 0, 0, 1]),
        FieldSpec::FinitePrime(5).one(),
    )
    .unwrap();
    let c = Curve::from_algebra(alg);
    assert_eq!(
        MModule::from_curve(&c).unwrap_err(),
        Error::BadResidue { q: 5, p: 3 }
    );
}
