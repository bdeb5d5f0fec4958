//! End-to-end oracle run producing `CHECK` lines.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gf::{residue, residues};
use super::mmodule::{gamma_class_count, gamma_class_count_brute, MModule};
use super::picard::{check_envelope, jacobian_order, torus_order, PicardModel, SearchBudget};
use super::points::CurveScan;
use crate::checks::Sink;
pub use crate::checks::{Check, Status};
use crate::curve::Curve;
use crate::descent::{descent_elem, eval_gamma_y, eval_x_minus_t};
use crate::error::Result;
use crate::etale::EtaleElem;
use crate::gamma::GammaElem;
use crate::poly::factor_mod_q;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub seed: u64,
    /// Number of classes sampled for the descent identities.
    pub samples: usize,
    pub budget: SearchBudget,
    /// Bound on `|L*|` for the brute-force count of `Gamma`.
    pub brute_limit: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 1,
            samples: 12,
            budget: SearchBudget::default(),
            brute_limit: 20_000,
        }
    }
}

/// `F5:p2:f=1,0,1,0,1,0,1`, coefficients from the constant term up.
pub fn instance_token(curve: &Curve) -> String {
    let coeffs: Vec<String> = residues(curve.f()).iter().map(u64::to_string).collect();
    let mut s = format!(
        "F{}:p{}:f={}",
        curve.base().characteristic(),
        curve.p(),
        coeffs.join(",")
    );
    let c0 = residue(curve.algebra().c0());
    if c0 != 1 {
        s.push_str(&format!(":c0={c0}"));
    }
    s
}

/// Whether `alpha` is a `p`-th root of unity with weighted norm 1, i.e. in `M`.
fn in_m(alpha: &EtaleElem) -> Result<bool> {
    let p = alpha.algebra().p() as i64;
    Ok(alpha.pow(p)?.is_one() && alpha.weighted_norm()?.is_one())
}

/// `alpha` as its constant value modulo each irreducible factor of `f0`.
pub fn alpha_values(alpha: &EtaleElem) -> Vec<u64> {
    factor_mod_q(alpha.algebra().radical())
        .iter()
        .map(|(g, _)| {
            let r = alpha.reduce_mod(g);
            if r.is_zero() {
                0
            } else {
                residue(&r.coeffs()[0])
            }
        })
        .collect()
}

pub fn run_oracle(curve: &Curve, cfg: &OracleConfig) -> Result<Vec<Check>> {
    let q = check_envelope(curve)?;
    let p = curve.p();
    let mut sink = Sink::new(instance_token(curve));
    let m = MModule::from_curve(curve)?;
    let d = m.d() as u32;
    let pp = p as u64;
    sink.eq("m_order", m.order_by_count(), pp.pow(d - 1));
    sink.eq("m_mu_order", m.order_by_count() / pp, pp.pow(d - 2));
    let pre = m.norm_preimage();
    sink.push(
        "norm_surjective",
        if pre.is_some() {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("(preimage {pre:?})"),
    );
    let co = m.coinvariant_orders();
    sink.eq("h1m_fixed_points", co.h1m, m.fixed_points());
    let counts = gamma_class_count(curve)?;
    sink.eq("prop31_order", counts.g_order, co.h1m);
    sink.eq("prop31_image", counts.gi_order, co.image_order);
    match gamma_class_count_brute(curve, cfg.brute_limit)? {
        Some(b) => sink.eq(
            "gamma_brute",
            format!("{}/{}", b.g_order, b.gi_order),
            format!("{}/{}", counts.g_order, counts.gi_order),
        ),
        None => sink.push(
            "gamma_brute",
            Status::Skip,
            format!("(|L*| > {})", cfg.brute_limit),
        ),
    }

    let model = PicardModel::build(curve, cfg.seed, cfg.budget)?;
    let scan = CurveScan::new(curve)?;
    let j = jacobian_order(curve.genus(), q, scan.count_points(1), scan.count_points(2));
    let pic0 = model.pic0().order();
    let pic_m = model.pic_m().order();
    sink.eq("zeta_order", pic0.clone(), BigInt::from(j));
    let t = torus_order(curve, q);
    sink.eq("torus_order", pic_m.clone(), &pic0 * BigInt::from(t));
    let bad_rows = model
        .omm_rows()
        .iter()
        .filter(|r| {
            model
                .pic0()
                .coords(&model.project(r))
                .iter()
                .any(|c| !c.is_zero())
        })
        .count();
    sink.tally(
        "quotient_map",
        model.omm_rows().len() - bad_rows,
        model.omm_rows().len(),
    );

    if p == 2 {
        let j2 = model.pic0().torsion_count(2);
        sink.eq(
            "j2_order",
            j2.clone(),
            BigInt::from(m.fixed_points_mod_mu()),
        );
        let split = m.orbits().iter().all(|(e, _)| *e == 1);
        if split {
            sink.eq("j2_split", j2, BigInt::from(2u64.pow(d - 2)));
        } else {
            sink.push(
                "j2_split",
                Status::Skip,
                format!("(orbits {:?})", m.orbits()),
            );
        }
    } else {
        sink.push("j2_order", Status::Skip, "(p != 2)".into());
        sink.push("j2_split", Status::Skip, "(p != 2)".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    alpha_checks(&model, &mut sink, &mut rng, cfg.samples)?;
    thm42_checks(&model, &mut sink, &mut rng, cfg.samples)?;
    Ok(sink.checks)
}

fn alpha_checks(
    model: &PicardModel,
    sink: &mut Sink,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<()> {
    let exponent = model
        .pic_m()
        .diagonal()
        .iter()
        .fold(BigInt::one(), |a, s| num_integer::lcm(a, s.clone()));
    let exponent = exponent.to_i64().unwrap_or(i64::MAX);
    let scale = |v: &[i64], k: i64| -> Vec<i64> { v.iter().map(|x| x * k).collect() };
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };

    // alpha on trivial classes: D = e v with e the exponent of Pic_m^0.
    let (mut ok, mut total) = (0, 0);
    for _ in 0..samples {
        let v = scale(&model.random_divisor(rng, 3), exponent);
        total += 1;
        if let Some(a) = model.alpha(&v)? {
            ok += a.is_one() as usize;
        }
    }
    sink.tally("alpha_trivial", ok, total);

    let gens = model.p_torsion_generators()?;
    let (mut ok_m, mut ok_hom, mut ok_wd, mut total) = (0, 0, 0, 0);
    let mut values = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let Some(a) = model.alpha(g)? else { continue };
        total += 1;
        ok_m += in_m(&a)? as usize;
        values.push(format!("{:?}", alpha_values(&a)));
        let h = &gens[(i + 1) % gens.len()];
        if let (Some(b), Some(ab)) = (model.alpha(h)?, model.alpha(&add(g, h))?) {
            ok_hom += (&a * &b == ab) as usize;
        }
        let shifted = add(g, &scale(&model.random_divisor(rng, 3), exponent));
        if let Some(a2) = model.alpha(&shifted)? {
            ok_wd += (a2 == a) as usize;
        }
    }
    sink.tally("alpha_in_m", ok_m, total);
    sink.tally("alpha_hom", ok_hom, total);
    sink.tally("alpha_well_defined", ok_wd, total);
    if !values.is_empty() {
        sink.push(
            "alpha_values",
            Status::Pass,
            format!("({})", values.join(" ")),
        );
    }
    Ok(())
}

fn thm42_checks(
    model: &PicardModel,
    sink: &mut Sink,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<()> {
    let p = model.curve().p() as i64;
    let (mut pow_ok, mut norm_ok, mut chi_ok, mut total, mut divisible) = (0, 0, 0, 0, 0);
    for _ in 0..samples {
        let mut v = model.random_divisor(rng, 4);
        let dp = match model.p_divide(&v, rng)? {
            Some(dp) => {
                divisible += 1;
                dp
            }
            None => {
                v.iter_mut().for_each(|x| *x *= p);
                model.p_divide(&v, rng)?.expect("p D is p-divisible")
            }
        };
        let rel: Vec<i64> = dp.iter().zip(&v).map(|(a, b)| p * a - b).collect();
        let hw = model
            .omm_value_at_w(&rel)?
            .expect("p D' - D is omm-principal");
        let d = model.divisor(&v)?;
        let theta = eval_x_minus_t(&model.divisor(&dp)?).checked_div(&hw)?;
        total += 1;
        pow_ok += (theta.pow(p)? == eval_x_minus_t(&d)) as usize;
        norm_ok += (theta.weighted_norm()? == eval_gamma_y(&d)?) as usize;
        chi_ok += (GammaElem::chi(&theta)? == descent_elem(&d)?) as usize;
    }
    sink.tally("thm42_theta_pow", pow_ok, total);
    sink.tally("thm42_norm", norm_ok, total);
    sink.tally("thm42_chi", chi_ok, total);
    sink.push(
        "thm42_divisible",
        Status::Pass,
        format!("({divisible}/{total} sampled classes divisible, rest multiplied by p)"),
    );
    Ok(())
}
