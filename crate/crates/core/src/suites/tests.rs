use std::time::Instant;

use super::*;
use crate::descent::descent_elem;

fn genus2() -> Curve {
    Curve::new(
        2,
        Poly::from_i64s(FieldSpec::Rationals, &[1, 0, 1, 0, 1, 0, 1]),
        FieldSpec::Rationals.one(),
    )
    .unwrap()
}

fn genus1_zeta3() -> Curve {
    let k = FieldSpec::Cyclotomic(3);
    Curve::new(3, Poly::from_i64s(k, &[0, 0, 1, 0, -2, 0, 1]), k.one()).unwrap()
}

#[test]
fn sampler_divisors_are_p_divisible() {
    for c in [genus2(), genus1_zeta3()] {
        let mut s = DivisorSampler::new(&c, 3);
        for _ in 0..20 {
            assert_eq!(s.divisor().degree() % c.p() as i64, 0);
            let d = s.degree_zero();
            assert_eq!(d.degree(), 0);
            descent_elem(&d).unwrap();
        }
    }
}

#[test]
fn genus2_suite_passes() {
    let cfg = VerifyConfig {
        samples: 20,
        ..VerifyConfig::default()
    };
    let t = Instant::now();
    let checks = run_verify(&genus2(), &cfg).unwrap();
    eprintln!("{:?}", t.elapsed());
    let names: Vec<&str> = checks.iter().map(|c| c.name).collect();
    assert_eq!(
        names,
        [
            "norm_identity",
            "multiplicativity",
            "principal_identity",
            "principal_identity_y",
            "reciprocity",
            "homomorphism"
        ]
    );
    for c in &checks {
        assert_eq!(c.status, Status::Pass, "{c}");
    }
    assert_eq!(
        checks[0].to_string(),
        "CHECK norm_identity Q:p2:f=x^6+x^4+x^2+1 PASS (20/20)"
    );
}

#[test]
fn genus1_suite_skips_homomorphism() {
    let cfg = VerifyConfig {
        samples: 10,
        ..VerifyConfig::default()
    };
    let checks = run_verify(&genus1_zeta3(), &cfg).unwrap();
    assert_eq!(checks.len(), 6);
    assert!(checks[..5].iter().all(|c| c.status == Status::Pass));
    assert_eq!(checks[5].status, Status::Skip);
}

#[test]
fn same_seed_same_report() {
    let cfg = VerifyConfig {
        samples: 5,
        seed: 9,
        ..VerifyConfig::default()
    };
    assert_eq!(
        run_verify(&genus2(), &cfg).unwrap(),
        run_verify(&genus2(), &cfg).unwrap()
    );
}

#[test]
fn finite_fields_are_rejected() {
    let k = FieldSpec::FinitePrime(5);
    let c = Curve::new(2, Poly::from_i64s(k, &[1, 0, 1, 0, 1, 0, 1]), k.one()).unwrap();
    assert!(matches!(
        run_verify(&c, &VerifyConfig::default()),
        Err(Error::UnsupportedBase(_))
    ));
}
