//! Randomized invariants that cut across modules: valuation algebra,
//! square-root and quadratic-root residuals, the fixed-point property of
//! limits, Pell norms, and projective invariance of the locus
//! enumerations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcf::cf::{e_matrix, Pcf};
use pcf::convergence::{check_convergence, limit, Limit};
use pcf::exact::padic::{padic_quad_roots, padic_sqrt, PadicRoot, QuadRootsOutcome};
use pcf::exact::{padic_valuation, parse_rational, rat, rat_int, Rational, Valuation};
use pcf::loci;
use pcf::pell::{brahmagupta, fundamental_unit, iterate_class};
use pcf::quad::QuadPoly;
use pcf::radical03::f_poly;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=60).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_small_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(
        x in nonzero_small_rational(),
        y in nonzero_small_rational(),
    ) {
        let p = 5u64;
        let vx = padic_valuation(&x, p).unwrap().finite();
        let vy = padic_valuation(&y, p).unwrap().finite();
        let product = padic_valuation(&(&x * &y), p).unwrap().finite();
        prop_assert_eq!(product, vx + vy);
        match padic_valuation(&(&x + &y), p).unwrap() {
            Valuation::Infinite => prop_assert_eq!(vx, vy),
            Valuation::Finite(vs) => {
                prop_assert!(vs >= vx.min(vy));
                if vx != vy {
                    prop_assert_eq!(vs, vx.min(vy));
                }
            }
        }
    }

    #[test]
    fn rational_strings_round_trip(x in small_rational()) {
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn pcf_json_round_trips(
        pre in proptest::collection::vec((-40i64..=40, 0u32..=2), 0..3),
        per in proptest::collection::vec((-40i64..=40, 0u32..=2), 1..4),
    ) {
        let entry = |(m, j): (i64, u32)| rat(m, 7i64.pow(j));
        let pcf = Pcf::new(
            7,
            pre.into_iter().map(entry).collect(),
            per.into_iter().map(entry).collect(),
        ).unwrap();
        let json = serde_json::to_string(&pcf).unwrap();
        let back: Pcf = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, pcf);
    }

    #[test]
    fn brahmagupta_norms_multiply(
        u1 in -50i64..=50, v1 in -50i64..=50,
        u2 in -50i64..=50, v2 in -50i64..=50,
    ) {
        let d = 10u64;
        let norm = |u: &BigInt, v: &BigInt| u * u - BigInt::from(d) * v * v;
        let (bu1, bv1) = (BigInt::from(u1), BigInt::from(v1));
        let (bu2, bv2) = (BigInt::from(u2), BigInt::from(v2));
        let (u, v) = brahmagupta((&bu1, &bv1), (&bu2, &bv2), d);
        prop_assert_eq!(norm(&u, &v), norm(&bu1, &bv1) * norm(&bu2, &bv2));
    }
}

/// sqrt(x)^2 = x to the advertised modulus, over random residues and
/// even-valuation scalings.
#[test]
fn padic_sqrt_squares_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut successes = 0;
    for _ in 0..1000 {
        let p = *[3u64, 5, 7, 13].get(rng.gen_range(0..4)).unwrap();
        let unit = rng.gen_range(1..200i64);
        let shift = rng.gen_range(-2i64..=2) * 2;
        let x = rat_int(unit)
            * if shift >= 0 {
                rat_int((p as i64).pow(shift as u32))
            } else {
                rat(1, (p as i64).pow((-shift) as u32))
            };
        let n = rng.gen_range(1..=8u32);
        if let Some(root) = padic_sqrt(&x, p, n).unwrap() {
            successes += 1;
            let vx = padic_valuation(&x, p).unwrap().finite();
            assert!(
                root.square().congruent_to_rational(&x, vx + n as i64),
                "sqrt({x})^2 mismatch at p = {p}, n = {n}"
            );
            // canonical choice: first unit digit in [1, (p-1)/2]
            let first = root.unit_digits() % BigInt::from(p).magnitude();
            assert!(first <= ((p - 1) / 2).into());
        }
    }
    assert!(successes > 200);
}

/// Finite roots r of F in Q_p satisfy
/// v_p(F(r)) >= N - 2 max(0, -v_p(r)).
#[test]
fn quad_roots_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let p = *[3u64, 5, 7].get(rng.gen_range(0..3)).unwrap();
        let f = QuadPoly::new(
            rat(rng.gen_range(-9..=9), (p as i64).pow(rng.gen_range(0..=1))),
            rat(rng.gen_range(-9..=9), (p as i64).pow(rng.gen_range(0..=1))),
            rat(rng.gen_range(-9..=9), (p as i64).pow(rng.gen_range(0..=1))),
        );
        if f.is_zero() {
            continue;
        }
        let n = 6u32;
        let roots = match padic_quad_roots(&f, p, n) {
            Ok(QuadRootsOutcome::Roots(roots)) => roots,
            Ok(QuadRootsOutcome::NotInQp) => continue,
            Err(_) => continue,
        };
        for root in roots {
            match root {
                PadicRoot::Rational(r) => assert!(f.eval(&r).is_zero()),
                PadicRoot::Infinity => assert!(f.a().is_zero()),
                PadicRoot::Approx(r) => {
                    let slack = 2 * (-r.valuation()).max(0);
                    let value = Limit::PAdic(r);
                    assert!(
                        value.satisfies(&f, p, n as i64 - slack),
                        "residual too large for {f} at p = {p}"
                    );
                }
            }
        }
    }
}

/// The limit of a convergent PCF is a fixed point of the Moebius action of
/// its E matrix: exactly for rational limits, to N - 2|v_p(limit)| digits
/// for irrational ones.
#[test]
fn limit_is_fixed_point_of_e_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 200 {
        let p = *[3u64, 5, 7].get(rng.gen_range(0..3)).unwrap();
        let k = rng.gen_range(1..=3usize);
        let n = rng.gen_range(0..=2usize);
        let entry = |rng: &mut ChaCha8Rng| {
            let m = rng.gen_range(-15i64..=15);
            let j = rng.gen_range(0..=2u32);
            rat(m, (p as i64).pow(j))
        };
        let pre: Vec<Rational> = (0..n).map(|_| entry(&mut rng)).collect();
        let per: Vec<Rational> = (0..k).map(|_| entry(&mut rng)).collect();
        let pcf = Pcf::new(p, pre, per).unwrap();
        if !check_convergence(&pcf).convergent {
            continue;
        }
        let precision = 8u32;
        let e = e_matrix(&pcf);
        match limit(&pcf, precision) {
            Ok(Limit::ExactRational(x)) => {
                let den = &e.e21 * &x + &e.e22;
                assert!(!den.is_zero());
                let image = (&e.e11 * &x + &e.e12) / den;
                assert_eq!(image, x, "rational fixed point failed for {pcf}");
            }
            Ok(Limit::Infinity) => {
                assert!(e.e21.is_zero(), "infinity not fixed for {pcf}");
            }
            Ok(Limit::PAdic(x)) => {
                let slack = 2 * x.valuation().abs();
                // E * (x, 1) must be proportional to (x, 1): compare
                // (e11 x + e12) with x (e21 x + e22)
                let lhs = match x.mul_rational(&e.e11) {
                    Ok(v) => v.add_rational(&e.e12),
                    Err(_) => continue,
                };
                let rhs = match x.mul_rational(&e.e21) {
                    Ok(v) => v
                        .add_rational(&e.e22)
                        .map(|w| w.mul(&x)),
                    Err(_) => continue,
                };
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        let target = x.valuation() + precision as i64 - slack - 2;
                        let bound = target
                            .min(l.absolute_precision())
                            .min(r.absolute_precision());
                        assert!(
                            l.congruent_mod(&r, bound),
                            "p-adic fixed point failed for {pcf}"
                        );
                    }
                    _ => continue,
                }
            }
            Err(_) => continue,
        }
        checked += 1;
    }
}

/// Class iteration satisfies the three-term recurrence in both directions.
#[test]
fn pell_orbits_satisfy_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let d = *[2u64, 3, 5, 10, 13].get(rng.gen_range(0..5)).unwrap();
        let unit = fundamental_unit(d).unwrap();
        let u0 = BigInt::from(rng.gen_range(-30i64..=30));
        let v0 = BigInt::from(rng.gen_range(-30i64..=30));
        let base = rng.gen_range(-3i64..=1);
        let triple: Vec<(BigInt, BigInt)> = (base..base + 3)
            .map(|i| iterate_class((&u0, &v0), d, i).unwrap())
            .collect();
        let two_u = BigInt::from(2) * &unit.u_star;
        assert_eq!(triple[2].0, &two_u * &triple[1].0 - &triple[0].0);
        assert_eq!(triple[2].1, &two_u * &triple[1].1 - &triple[0].1);
    }
}

/// The closed-form loci are stable under scaling F by a nonzero rational.
#[test]
fn loci_are_projectively_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut scalars = vec![rat(3, 7), rat(-5, 2), rat_int(4)];
    for _ in 0..50 {
        scalars.push(rat(rng.gen_range(1..40), rng.gen_range(1..40)));
    }
    let polys = [
        QuadPoly::new(rat_int(1), rat(8, 3), rat_int(-1)),
        QuadPoly::new(rat_int(1), rat_int(0), rat(-10, 9)),
        QuadPoly::from_ints(3, 1, 3),
        QuadPoly::from_ints(1, 1, 1),
        QuadPoly::from_ints(1, -12, 8),
    ];
    for f in &polys {
        for lambda in &scalars {
            let scaled = f.scale(lambda);
            assert_eq!(loci::locus_0_1(f, 3).unwrap(), loci::locus_0_1(&scaled, 3).unwrap());
            assert_eq!(loci::locus_1_1(f, 3).unwrap(), loci::locus_1_1(&scaled, 3).unwrap());
            assert_eq!(loci::locus_0_2(f, 3).unwrap(), loci::locus_0_2(&scaled, 3).unwrap());
        }
    }
}

/// gcd(a, f_n(a)) = 1, the arithmetic fact behind the a^2 + 1 family.
#[test]
fn f_poly_coprime_to_argument() {
    for a in 1i64..=10 {
        for n in 0u32..=30 {
            assert!(f_poly(n, a).gcd(&BigInt::from(a)).is_one());
        }
    }
}

/// The general (1,3) member at a = p converges to sqrt(p^2 + 1) for every
/// odd prime p up to 100.
#[test]
fn sqrt_p_squared_plus_one_family_sweep() {
    use pcf::families13::family_1_3_general;
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
        let member = family_1_3_general(&rat_int(p as i64), &rat_int(1), p).unwrap();
        assert!(member.convergence.convergent, "p = {p}");
        let d = rat_int((p * p + 1) as i64);
        let value = limit(&member.pcf, 5).unwrap();
        assert!(
            value.satisfies(&QuadPoly::x_squared_minus(&d), p, 5),
            "limit^2 != p^2 + 1 at p = {p}"
        );
    }
}
