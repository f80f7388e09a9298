//! Generalized Pell equations x^2 - d y^2 = n: the fundamental unit from
//! the integer continued fraction of sqrt(d), the negative Pell equation,
//! Nagell's fundamental solutions for general n, the Brahmagupta product,
//! and orbit iteration under the unit group.
//!
//! All arithmetic is integer-exact; square roots are integer Newton
//! iterations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::primes::is_perfect_square_u64;

/// The minimal positive solution of x^2 - d y^2 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellFundamental {
    pub d: u64,
    pub u_star: BigInt,
    pub v_star: BigInt,
}

/// Fundamental solutions (one per Nagell class) of x^2 - d y^2 = n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellClassSet {
    pub d: u64,
    pub n: BigInt,
    pub fundamentals: Vec<(BigInt, BigInt)>,
}

fn check_d(d: u64) -> Result<()> {
    if d < 2 || is_perfect_square_u64(d) {
        return Err(Error::PerfectSquare(d));
    }
    Ok(())
}

/// The purely periodic continued fraction of sqrt(d): a0 = floor(sqrt d)
/// and the period from the classical (P, Q) recurrence, which closes when
/// the partial quotient 2 a0 appears.
pub fn sqrt_cf(d: u64) -> Result<(u64, Vec<u64>)> {
    check_d(d)?;
    let a0 = d.isqrt();
    let mut period = Vec::new();
    let mut p = 0u64;
    let mut q = 1u64;
    let mut a = a0;
    loop {
        p = a * q - p;
        q = (d - p * p) / q;
        a = (a0 + p) / q;
        period.push(a);
        if a == 2 * a0 {
            return Ok((a0, period));
        }
    }
}

/// Walk the convergents of sqrt(d) until x^2 - d y^2 hits `target`, up to
/// `max_terms` partial quotients.
fn cf_convergent_search(d: u64, target: i64, max_terms: usize) -> Option<(BigInt, BigInt)> {
    let (a0, period) = sqrt_cf(d).ok()?;
    let d = BigInt::from(d);
    let target = BigInt::from(target);
    let mut h_prev = BigInt::from(1);
    let mut k_prev = BigInt::from(0);
    let mut h = BigInt::from(a0);
    let mut k = BigInt::from(1);
    for i in 0..max_terms {
        if &h * &h - &d * &k * &k == target {
            return Some((h, k));
        }
        let a = BigInt::from(period[i % period.len()]);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    None
}

/// The fundamental unit (u*, v*): minimal positive solution of
/// x^2 - d y^2 = 1.
pub fn fundamental_unit(d: u64) -> Result<PellFundamental> {
    check_d(d)?;
    let (_, period) = sqrt_cf(d)?;
    let (u_star, v_star) = cf_convergent_search(d, 1, 2 * period.len() + 2)
        .ok_or_else(|| Error::Internal(format!("no unit found for d = {d}")))?;
    Ok(PellFundamental { d, u_star, v_star })
}

/// The fundamental solution of the negative Pell equation x^2 - d y^2 = -1,
/// which exists iff the continued-fraction period length of sqrt(d) is odd.
pub fn neg_pell(d: u64) -> Result<Option<(BigInt, BigInt)>> {
    check_d(d)?;
    let (_, period) = sqrt_cf(d)?;
    if period.len() % 2 == 0 {
        return Ok(None);
    }
    Ok(cf_convergent_search(d, -1, period.len() + 1))
}

/// Brahmagupta composition: (u1, v1) * (u2, v2) =
/// (u1 u2 + d v1 v2, u1 v2 + u2 v1). Norms multiply.
pub fn brahmagupta(s1: (&BigInt, &BigInt), s2: (&BigInt, &BigInt), d: u64) -> (BigInt, BigInt) {
    let d = BigInt::from(d);
    (
        s1.0 * s2.0 + &d * s1.1 * s2.1,
        s1.0 * s2.1 + s2.0 * s1.1,
    )
}

/// The i-fold action of the fundamental unit on a solution; negative i
/// applies the inverse unit (u*, -v*). Consecutive iterates satisfy
/// x_{i+2} = 2 u* x_{i+1} - x_i.
pub fn iterate_class(fund: (&BigInt, &BigInt), d: u64, i: i64) -> Result<(BigInt, BigInt)> {
    let unit = fundamental_unit(d)?;
    let (step_u, step_v) = if i >= 0 {
        (unit.u_star.clone(), unit.v_star.clone())
    } else {
        (unit.u_star.clone(), -unit.v_star.clone())
    };
    let mut out = (fund.0.clone(), fund.1.clone());
    for _ in 0..i.unsigned_abs() {
        out = brahmagupta((&out.0, &out.1), (&step_u, &step_v), d);
    }
    Ok(out)
}

/// Nagell equivalence: (u1, v1) and (u2, v2) with norm n lie in the same
/// class iff (u1 u2 - d v1 v2)/n and (v1 u2 - u1 v2)/n are both integers.
fn same_class(a: (&BigInt, &BigInt), b: (&BigInt, &BigInt), d: u64, n: &BigInt) -> bool {
    let d = BigInt::from(d);
    let first = a.0 * b.0 - &d * a.1 * b.1;
    let second = a.1 * b.0 - a.0 * b.1;
    first.is_multiple_of(n) && second.is_multiple_of(n)
}

/// All fundamental solutions of x^2 - d y^2 = n, one per class.
///
/// Candidates are read off Nagell's rectangle: for n > 0,
/// 2 u^2 <= (u* + 1) n and 2 (u* + 1) v^2 <= v*^2 n; for n < 0 the
/// companion bounds with u* - 1 and d v^2 >= |n|. Within a class the
/// representative has minimal non-negative v, ties broken by u > 0.
/// `v_cap` optionally truncates the v-range of the scan.
pub fn pell_classes(d: u64, n: &BigInt, v_cap: Option<u64>) -> Result<PellClassSet> {
    check_d(d)?;
    if n.is_zero() {
        return Err(Error::Invalid("n must be nonzero".into()));
    }
    let unit = fundamental_unit(d)?;
    let big_d = BigInt::from(d);
    let abs_n = n.abs();
    let two = BigInt::from(2);
    // v upper bound: 2 (u* -+ 1) v^2 <= v*^2 |n|
    let u_shift = if n.is_positive() {
        &unit.u_star + 1
    } else {
        &unit.u_star - 1
    };
    let v_bound_sq: BigInt = (&unit.v_star * &unit.v_star * &abs_n) / (&two * &u_shift);
    let mut v_max = v_bound_sq.sqrt();
    if let Some(cap) = v_cap {
        v_max = v_max.min(BigInt::from(cap));
    }
    let v_max: i64 = num_traits::ToPrimitive::to_i64(&v_max)
        .ok_or_else(|| Error::Invalid("class rectangle too large to scan".into()))?;

    let candidates: Vec<(BigInt, BigInt)> = (0..=v_max)
        .into_par_iter()
        .flat_map_iter(|v| {
            let v = BigInt::from(v);
            let u_sq = n + &big_d * &v * &v;
            let mut found = Vec::new();
            if !u_sq.is_negative() {
                let u = u_sq.sqrt();
                if &u * &u == u_sq {
                    // |u| rectangle bound: 2 u^2 <= (u* -+ 1)|n|
                    if &two * &u * &u <= &u_shift * &abs_n {
                        if u.is_zero() {
                            found.push((u, v));
                        } else {
                            found.push((u.clone(), v.clone()));
                            found.push((-u, v));
                        }
                    }
                }
            }
            found.into_iter()
        })
        .collect();

    // Candidates arrive ordered by v ascending, and within one v with u > 0
    // first, so the first representative seen in each class is Nagell's
    // fundamental (minimal non-negative v, ties broken by u > 0).
    let mut fundamentals: Vec<(BigInt, BigInt)> = Vec::new();
    'candidate: for cand in candidates {
        for kept in &fundamentals {
            if same_class((&cand.0, &cand.1), (&kept.0, &kept.1), d, n) {
                continue 'candidate;
            }
        }
        fundamentals.push(cand);
    }
    fundamentals.sort_by_key(|a| (a.1.clone(), a.0.clone()));
    Ok(PellClassSet {
        d,
        n: n.clone(),
        fundamentals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sqrt_cf_classics() {
        assert_eq!(sqrt_cf(2).unwrap(), (1, vec![2]));
        assert_eq!(sqrt_cf(10).unwrap(), (3, vec![6]));
        assert_eq!(sqrt_cf(7).unwrap(), (2, vec![1, 1, 1, 4]));
        assert_eq!(sqrt_cf(9), Err(Error::PerfectSquare(9)));
    }

    #[test]
    fn fundamental_units() {
        // brute-force oracle over small v
        let brute = |d: u64| -> (BigInt, BigInt) {
            for v in 1u64.. {
                let t = 1 + d as u128 * (v as u128) * (v as u128);
                let u = (t as f64).sqrt() as u128;
                for u in [u.saturating_sub(1), u, u + 1] {
                    if u * u == t {
                        return (BigInt::from(u), BigInt::from(v));
                    }
                }
            }
            unreachable!()
        };
        for d in [2u64, 5, 10] {
            let unit = fundamental_unit(d).unwrap();
            assert_eq!((unit.u_star, unit.v_star), brute(d), "d = {d}");
        }
        assert_eq!(
            fundamental_unit(10).unwrap(),
            PellFundamental {
                d: 10,
                u_star: big(19),
                v_star: big(6)
            }
        );
    }

    #[test]
    fn negative_pell() {
        assert_eq!(neg_pell(2).unwrap(), Some((big(1), big(1))));
        assert_eq!(neg_pell(5).unwrap(), Some((big(2), big(1))));
        assert_eq!(neg_pell(3).unwrap(), None);
        assert_eq!(neg_pell(10).unwrap(), Some((big(3), big(1))));
    }

    #[test]
    fn class_sets() {
        let classes = pell_classes(10, &big(9), None).unwrap();
        assert_eq!(
            classes.fundamentals,
            vec![(big(3), big(0)), (big(-7), big(2)), (big(7), big(2))]
        );
        let classes = pell_classes(5, &big(4), None).unwrap();
        assert_eq!(
            classes.fundamentals,
            vec![(big(2), big(0)), (big(-3), big(1)), (big(3), big(1))]
        );
        let classes = pell_classes(10, &big(3), None).unwrap();
        assert!(classes.fundamentals.is_empty());
    }

    #[test]
    fn brahmagupta_products() {
        assert_eq!(
            brahmagupta((&big(3), &big(0)), (&big(19), &big(6)), 10),
            (big(57), big(18))
        );
        assert_eq!(
            brahmagupta((&big(5), &big(7)), (&big(1), &big(0)), 10),
            (big(5), big(7))
        );
        assert_eq!(
            brahmagupta((&big(-7), &big(2)), (&big(19), &big(6)), 10),
            (big(-13), big(-4))
        );
    }

    #[test]
    fn class_iteration() {
        assert_eq!(
            iterate_class((&big(7), &big(2)), 10, 1).unwrap(),
            (big(253), big(80))
        );
        assert_eq!(
            iterate_class((&big(7), &big(2)), 10, 0).unwrap(),
            (big(7), big(2))
        );
        // inverse action applies (19, -6)
        assert_eq!(
            iterate_class((&big(-7), &big(2)), 10, -1).unwrap(),
            brahmagupta((&big(-7), &big(2)), (&big(19), &big(-6)), 10)
        );
    }

    #[test]
    fn orbit_covers_small_solutions() {
        // every solution of x^2 - 10 y^2 = 9 with |v| <= 100 lies in the
        // orbit of exactly one emitted fundamental
        let classes = pell_classes(10, &big(9), None).unwrap();
        for v in -100i64..=100 {
            let u_sq = 9 + 10 * v * v;
            let u = (u_sq as f64).sqrt() as i64;
            for u in [u - 1, u, u + 1] {
                if u >= 0 && u * u == u_sq {
                    for u in [u, -u] {
                        let hits = classes
                            .fundamentals
                            .iter()
                            .filter(|f| same_class((&big(u), &big(v)), (&f.0, &f.1), 10, &big(9)))
                            .count();
                        assert_eq!(hits, 1, "({u}, {v})");
                        if u == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_consistency() {
        // u_{i+2} = 2 u* u_{i+1} - u_i along any class orbit
        let unit = fundamental_unit(10).unwrap();
        let fund = (big(7), big(2));
        let orbit: Vec<(BigInt, BigInt)> = (-3..=3)
            .map(|i| iterate_class((&fund.0, &fund.1), 10, i).unwrap())
            .collect();
        for w in orbit.windows(3) {
            let two_u = big(2) * &unit.u_star;
            assert_eq!(w[2].0, &two_u * &w[1].0 - &w[0].0);
            assert_eq!(w[2].1, &two_u * &w[1].1 - &w[0].1);
            // and for the derived sequence u_i - d v_i
            let t = |s: &(BigInt, BigInt)| &s.0 - big(10) * &s.1;
            assert_eq!(t(&w[2]), two_u * t(&w[1]) - t(&w[0]));
        }
    }
}
