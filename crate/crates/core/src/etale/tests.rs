use super::*;
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rationals;

fn qpoly(cs: &[i64]) -> Poly {
    Poly::from_i64s(Q, cs)
}

fn genus2() -> Arc<EtaleAlgebra> {
    EtaleAlgebra::new(2, qpoly(&[1, 0, 1, 0, 1, 0, 1]), Q.one()).unwrap()
}

/// x^2 (x-1)^2 (x+1)^2 over the given base.
fn triple_square(spec: FieldSpec) -> Arc<EtaleAlgebra> {
    let f = Poly::from_i64s(spec, &[0, 0, 1, 0, -2, 0, 1]);
    EtaleAlgebra::new(3, f, spec.one()).unwrap()
}

#[test]
fn make_examples() {
    let a = genus2();
    assert_eq!(a.f0(), &qpoly(&[1, 0, 1, 0, 1, 0, 1]));
    assert_eq!(a.degf(), 6);
    let b = triple_square(FieldSpec::Cyclotomic(3));
    assert_eq!(b.radical().to_coeff_string(), "0,0 -1,0 0,0 1,0");
    assert_eq!(b.sqfree().parts.len(), 1);
    assert_eq!(b.sqfree().parts[0].1, 2);
    assert_eq!(
        EtaleAlgebra::new(2, qpoly(&[0, 0, 1, -2, 1]), Q.one()).unwrap_err(),
        Error::NotPPowerFree {
            p: 2,
            multiplicity: 2
        }
    );
    assert_eq!(
        EtaleAlgebra::new(2, qpoly(&[1, 0, 0, 0, 0, 1]), Q.one()).unwrap_err(),
        Error::DegreeNotDivisible { p: 2, degree: 5 }
    );
    assert_eq!(
        EtaleAlgebra::new(
            3,
            Poly::from_i64s(FieldSpec::FinitePrime(3), &[1, 0, 0, 1]),
            FieldSpec::FinitePrime(3).one()
        )
        .unwrap_err(),
        Error::BadCharacteristic
    );
}

#[test]
fn c0_scales_f0_only() {
    let a = EtaleAlgebra::new(2, qpoly(&[1, 0, 1, 0, 1, 0, 1]), Q.from_i64(2)).unwrap();
    assert_eq!(a.f0(), &qpoly(&[2, 0, 2, 0, 2, 0, 2]));
    let beta = a.elem(qpoly(&[1, 1]));
    assert_eq!(beta.weighted_norm().unwrap(), Q.from_i64(4));
}

#[test]
fn arithmetic_examples() {
    let a = EtaleAlgebra::new(2, qpoly(&[1, 0, 0, 0, 0, 0, 1]), Q.one()).unwrap();
    let t = a.t();
    assert_eq!(&t * &t.pow(5).unwrap(), a.constant(Q.from_i64(-1)));
    assert_eq!(t.inv().unwrap(), a.elem(qpoly(&[0, 0, 0, 0, 0, -1])));
    let b = EtaleAlgebra::new(
        3,
        Poly::from_i64s(FieldSpec::Cyclotomic(3), &[0, -1, 0, 1]),
        FieldSpec::Cyclotomic(3).one(),
    )
    .unwrap();
    match b.t().inv() {
        Err(Error::ZeroDivisor { certificate }) => assert_eq!(certificate, "x"),
        other => panic!("expected zero divisor, got {other:?}"),
    }
}

#[test]
fn weighted_norm_examples() {
    let z3 = FieldSpec::Cyclotomic(3);
    let b = triple_square(z3);
    let beta = b.elem(Poly::from_i64s(z3, &[2, 1]));
    assert_eq!(beta.weighted_norm().unwrap(), z3.from_i64(36));
    let a = genus2();
    assert_eq!(
        a.elem(qpoly(&[1, 1])).weighted_norm().unwrap(),
        Q.from_i64(4)
    );
    assert_eq!(a.one().weighted_norm().unwrap(), Q.one());
    assert_eq!(
        a.elem(qpoly(&[0, 1, 0, 0])).weighted_norm().unwrap(),
        Q.one()
    );
}

#[test]
fn norm_and_trace_examples() {
    let a = EtaleAlgebra::new(2, qpoly(&[1, 0, 0, 0, 0, 0, 1]), Q.one()).unwrap();
    assert_eq!(a.t().norm(), Q.one());
    assert_eq!(a.constant(Q.from_i64(3)).norm(), Q.from_i64(729));
    assert_eq!(a.constant(Q.from_i64(3)).trace(), Q.from_i64(18));
    let z3 = FieldSpec::Cyclotomic(3);
    let b = EtaleAlgebra::new(3, Poly::from_i64s(z3, &[0, -1, 0, 1]), z3.one()).unwrap();
    assert_eq!(b.t().trace(), z3.zero());
    // Tr(T^2) over roots 0, 1, -1 is 2
    assert_eq!(b.t().pow(2).unwrap().trace(), z3.from_i64(2));
}

#[test]
fn pth_power_examples() {
    let a = genus2();
    let delta = a.elem(qpoly(&[1, 2, 1]));
    match delta.pth_power_test(DEFAULT_PRIME_BUDGET, 1).unwrap() {
        PthPower::Root(theta) => {
            let tp1 = a.elem(qpoly(&[1, 1]));
            assert!(theta == tp1 || theta == -&tp1 || theta.pow(2).unwrap() == delta);
        }
        other => panic!("expected a root, got {other:?}"),
    }
    let two = a.constant(Q.from_i64(2));
    let PthPower::NonResidue(q) = two.pth_power_test(DEFAULT_PRIME_BUDGET, 1).unwrap() else {
        panic!("2 should not be a square in L");
    };
    // Oracle: at the witness prime, some factor field of L modulo q has no square root of 2.
    let fq = FieldSpec::FinitePrime(q);
    let rq = a.radical().map_to(fq).unwrap();
    assert!(rq.is_squarefree());
    let mut some_nonsquare = false;
    for (psi, _) in factor_mod_q(&rq) {
        let size = q.pow(psi.deg() as u32);
        let e = num_bigint::BigUint::from((size - 1) / 2);
        let t = Poly::constant(fq.from_i64(2)).pow_mod(&e, &psi);
        some_nonsquare |= !t.is_one();
    }
    assert!(some_nonsquare);
    assert_eq!(
        a.one().pth_power_test(20, 1).unwrap(),
        PthPower::Root(a.one())
    );
}

#[test]
fn pth_power_over_finite_field() {
    let k = FieldSpec::FinitePrime(7);
    let f = Poly::from_i64s(k, &[1, 2, 0, 4, 0, 1, 1]);
    let a = EtaleAlgebra::new(3, f, k.one()).unwrap();
    let theta = a.elem(Poly::from_i64s(k, &[2, 5, 1]));
    let delta = theta.pow(3).unwrap();
    let PthPower::Root(r) = delta.pth_power_test(5, 9).unwrap() else {
        panic!()
    };
    assert_eq!(r.pow(3).unwrap(), delta);
}

#[test]
fn mu_p_examples() {
    let f = &qpoly(&[1, 0, 1]) * &qpoly(&[1, 0, 0, 0, 1]);
    let a = EtaleAlgebra::new(2, f, Q.one()).unwrap();
    let mu = a.mu_p_list().unwrap();
    assert_eq!(mu.len(), 4);
    for eta in &mu {
        assert!(eta.pow(2).unwrap().is_one());
    }
    let k5 = FieldSpec::FinitePrime(5);
    let c = EtaleAlgebra::new(2, Poly::from_i64s(k5, &[1, 0, 1]), k5.one()).unwrap();
    assert_eq!(c.mu_p_list().unwrap().len(), 4);
}

#[test]
fn mu_p_of_rank_one_algebra() {
    let z3 = FieldSpec::Cyclotomic(3);
    // f = (x - 1)(x - 2)^2: L = k x k
    let f = &Poly::from_i64s(z3, &[-1, 1]) * &Poly::from_i64s(z3, &[-2, 1]).pow(2);
    let a = EtaleAlgebra::new(3, f, z3.one()).unwrap();
    let mu = a.mu_p_list().unwrap();
    assert_eq!(mu.len(), 9);
    let norms: Vec<FieldElem> = mu.iter().map(|e| e.weighted_norm().unwrap()).collect();
    assert!(norms.iter().all(|n| n.pow(3).unwrap().is_one()));
}

#[test]
fn cyclotomic_factorization_policy() {
    let z3 = FieldSpec::Cyclotomic(3);
    // x^2 + x + 1 splits over Q(zeta_3); x^2 + 1 does not.
    let f = &Poly::from_i64s(z3, &[1, 1, 1]) * &Poly::from_i64s(z3, &[1, 0, 1]);
    let a = EtaleAlgebra::new(2, f, z3.one()).unwrap();
    assert_eq!(a.field_factors().unwrap().len(), 3);
    let b = EtaleAlgebra::new(2, Poly::from_i64s(z3, &[1, 0, 0, 0, 1]), z3.one()).unwrap();
    assert!(matches!(
        b.field_factors(),
        Err(Error::FactorizationUnavailable(_))
    ));
}

fn small_rat() -> impl Strategy<Value = i64> {
    -6i64..=6
}

proptest! {
    #[test]
    fn weighted_norm_multiplicative(a in prop::collection::vec(small_rat(), 1..6), b in prop::collection::vec(small_rat(), 1..6)) {
        let alg = genus2();
        let x = alg.elem(qpoly(&a));
        let y = alg.elem(qpoly(&b));
        prop_assume!(x.is_invertible() && y.is_invertible());
        prop_assert_eq!((&x * &y).weighted_norm().unwrap(), &x.weighted_norm().unwrap() * &y.weighted_norm().unwrap());
        prop_assert!((&(&x * &y) * &(&x * &y).inv().unwrap()).is_one());
    }

    /// Oracle: for split f the weighted norm is a product of values at the roots.
    #[test]
    fn weighted_norm_matches_root_product(
        roots in prop::collection::btree_set(-5i64..=5, 2..5),
        mults in prop::collection::vec(1u32..3, 4),
        beta in prop::collection::vec(small_rat(), 1..4),
    ) {
        let roots: Vec<i64> = roots.into_iter().collect();
        let z3 = FieldSpec::Cyclotomic(3);
        let mut f = Poly::one(z3);
        let mut total = 0;
        for (r, m) in roots.iter().zip(&mults) {
            f = &f * &Poly::from_i64s(z3, &[-r, 1]).pow(*m);
            total += m;
        }
        prop_assume!(total % 3 == 0);
        let alg = EtaleAlgebra::new(3, f, z3.one()).unwrap();
        let b = Poly::from_i64s(z3, &beta);
        let elem = alg.elem(b.clone());
        let mut expected = z3.one();
        for (r, m) in roots.iter().zip(&mults) {
            expected = &expected * &b.eval(&z3.from_i64(*r)).pow(*m as i64).unwrap();
        }
        match elem.weighted_norm() {
            Ok(n) => prop_assert_eq!(n, expected),
            Err(e) => {
                prop_assert_eq!(e, Error::NotInvertible);
                prop_assert!(expected.is_zero());
            }
        }
    }

    #[test]
    fn constant_norm_is_power(a in 1i64..20) {
        let alg = genus2();
        let c = Q.from_i64(a);
        prop_assert_eq!(alg.constant(c.clone()).weighted_norm().unwrap(), c.pow(6).unwrap());
    }

    #[test]
    fn norm_of_x_minus_t(r in -30i64..30) {
        let alg = genus2();
        let x = alg.elem(qpoly(&[r, -1]));
        let f_r = alg.f().eval(&Q.from_i64(r));
        prop_assert_eq!(x.weighted_norm().unwrap(), f_r.checked_div(alg.c()).unwrap());
    }

    #[test]
    fn pth_power_recovers_root(a in prop::collection::vec(small_rat(), 1..6)) {
        let alg = genus2();
        let theta = alg.elem(qpoly(&a));
        prop_assume!(theta.is_invertible());
        let delta = theta.pow(2).unwrap();
        match delta.pth_power_test(DEFAULT_PRIME_BUDGET, 3).unwrap() {
            PthPower::Root(r) => {
                let eta = r.checked_div(&theta).unwrap();
                prop_assert!(alg.mu_p_list().unwrap().contains(&eta));
            }
            other => prop_assert!(false, "no root found: {:?}", other),
        }
    }

    #[test]
    fn mu_p_norms_are_roots_of_unity(q in prop::sample::select(vec![7u64, 13, 19]), cs in prop::collection::vec(0i64..19, 6)) {
        let k = FieldSpec::FinitePrime(q);
        let mut coeffs = cs.clone();
        coeffs.push(1);
        let f = Poly::from_i64s(k, &coeffs);
        let Ok(alg) = EtaleAlgebra::new(3, f, k.one()) else { return Ok(()) };
        for eta in alg.mu_p_list().unwrap() {
            let n = eta.weighted_norm().unwrap();
            prop_assert!(n.pow(3).unwrap().is_one());
        }
    }
}
