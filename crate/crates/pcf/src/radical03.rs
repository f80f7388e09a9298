//! Convergent p-adic expansions of sqrt(d) of type (0,3).
//!
//! For F = x^2 - d the period (a1, a2, a3) of a convergent expansion has
//! integer a1, a3 with
//!
//! ```text
//! a1^2 - d a3^2 = d - 1,        a1 - d a3 = ((d-1)/v) p^s,
//! ```
//!
//! a2 = v/p^s for a (signed) divisor v of d - 1, s >= 1, and p dividing
//! none of a1, a3, v. Solutions of the Pell equation are organized into
//! finitely many classes, so the search walks each class orbit under the
//! fundamental unit and reads candidate primes off the denominator of
//! (d-1)/(a1 - d a3).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

use crate::cf::{variety_membership, Pcf};
use crate::convergence::{check_convergence, limit};
use crate::error::{Error, Result};
use crate::exact::primes::{
    has_prime_factor_3_mod_4, is_odd_prime_u64, is_square_free_u64,
    multiplicative_order, prime_power,
};
use crate::exact::{int_valuation, rat_int, Rational};
use crate::loci::{FamilyDescriptor, LocusPoint, LocusResult};
use crate::quad::QuadPoly;

/// A verified period (a1, v/p^s, a3) whose continued fraction converges
/// p-adically to sqrt(d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical03Solution {
    pub d: i64,
    pub p: u64,
    pub s: u32,
    pub a1: BigInt,
    pub a3: BigInt,
    /// Signed divisor of d - 1 with a2 = v / p^s.
    pub v: BigInt,
}

impl Radical03Solution {
    pub fn a2(&self) -> Rational {
        Rational::new(self.v.clone(), BigInt::from(self.p).pow(self.s))
    }

    pub fn pcf(&self) -> Pcf {
        Pcf::new(
            self.p,
            Vec::new(),
            vec![
                Rational::from_integer(self.a1.clone()),
                self.a2(),
                Rational::from_integer(self.a3.clone()),
            ],
        )
        .expect("verified solutions build valid continued fractions")
    }

    /// gcd(a1 + a3, 1 - a1 a3), the quantity bounding p^s ("classGcd" to
    /// this k; "classGcd" avoids the clash with the period length.)
    pub fn class_gcd(&self) -> BigInt {
        (&self.a1 + &self.a3).gcd(&(BigInt::one() - &self.a1 * &self.a3))
    }
}

impl Serialize for Radical03Solution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Radical03Solution", 7)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("a1", &self.a1.to_string())?;
        st.serialize_field("a2", &self.a2().to_string())?;
        st.serialize_field("a3", &self.a3.to_string())?;
        st.serialize_field("limitCheck", "ok")?;
        st.end()
    }
}

/// Necessary condition on d for any (0,3) expansion of sqrt(d) to exist at
/// any prime: d > 0, 4 does not divide d, and no prime q = 3 (mod 4)
/// divides d.
pub fn d_filter(d: i64) -> bool {
    if d <= 0 || d % 4 == 0 {
        return false;
    }
    !has_prime_factor_3_mod_4(d as u64)
}

/// Verify a candidate end to end and package it, or explain the rejection.
fn verify_solution(
    d: i64,
    p: u64,
    s: u32,
    a1: &BigInt,
    a3: &BigInt,
    v: &BigInt,
) -> Option<Radical03Solution> {
    let big_d = BigInt::from(d);
    let d_minus_1 = &big_d - BigInt::one();
    if a1 * a1 - &big_d * a3 * a3 != d_minus_1 {
        return None;
    }
    let p_pow = BigInt::from(p).pow(s);
    if v.is_zero() || !d_minus_1.is_multiple_of(v) {
        return None;
    }
    if a1 - &big_d * a3 != (&d_minus_1 / v) * &p_pow {
        return None;
    }
    let big_p = BigInt::from(p);
    if (a1 % &big_p).is_zero() || (a3 % &big_p).is_zero() || (v % &big_p).is_zero() {
        return None;
    }
    let solution = Radical03Solution {
        d,
        p,
        s,
        a1: a1.clone(),
        a3: a3.clone(),
        v: v.clone(),
    };
    let pcf = solution.pcf();
    let f = QuadPoly::x_squared_minus(&rat_int(d));
    let member = variety_membership(&pcf, &f).ok()?.member;
    if !member || !check_convergence(&pcf).convergent {
        return None;
    }
    let value = limit(&pcf, 4).ok()?;
    if !value.satisfies(&f, p, 4) {
        return None;
    }
    Some(solution)
}

/// Search all convergent (0,3) expansions of sqrt(d) reachable within
/// `max_index` unit steps of the Pell class fundamentals.
///
/// With `p = None` every odd prime-power denominator found along the
/// orbits is accepted (the prime must fit in 64 bits); otherwise only the
/// given prime. `max_class_scan` optionally truncates the Nagell
/// rectangle. Results are sorted by (p, |a1|) and are complete only within
/// the index bound.
pub fn search_0_3(
    d: i64,
    p: Option<u64>,
    max_index: u32,
    max_class_scan: Option<u64>,
) -> Result<Vec<Radical03Solution>> {
    if d <= 1 {
        return Err(Error::Invalid(format!("d must be > 1, got {d}")));
    }
    if !is_square_free_u64(d as u64) {
        return Err(Error::NotSquareFree(d));
    }
    if let Some(p) = p {
        if !is_odd_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
    }
    if !d_filter(d) {
        return Ok(Vec::new());
    }
    let d_minus_1 = BigInt::from(d - 1);
    let classes = crate::pell::pell_classes(d as u64, &d_minus_1, max_class_scan)?;
    let unit = crate::pell::fundamental_unit(d as u64)?;
    let found: Vec<Radical03Solution> = classes
        .fundamentals
        .par_iter()
        .flat_map_iter(|fund| {
            // walk the orbit in both directions from the fundamental
            let mut orbit = vec![fund.clone()];
            let mut up = fund.clone();
            let mut down = fund.clone();
            for _ in 0..max_index {
                up = crate::pell::brahmagupta(
                    (&up.0, &up.1),
                    (&unit.u_star, &unit.v_star),
                    d as u64,
                );
                down = crate::pell::brahmagupta(
                    (&down.0, &down.1),
                    (&unit.u_star, &(-unit.v_star.clone())),
                    d as u64,
                );
                orbit.push(up.clone());
                orbit.push(down.clone());
            }
            let d_minus_1 = d_minus_1.clone();
            orbit.into_iter().flat_map(move |(u, v)| {
                let mut hits = Vec::new();
                for (a1, a3) in [(u.clone(), v.clone()), (-u.clone(), -v.clone())] {
                    let t = &a1 - BigInt::from(d) * &a3;
                    if t.is_zero() {
                        continue;
                    }
                    let a2 = Rational::new(d_minus_1.clone(), t);
                    let denom = a2.denom().to_biguint().unwrap();
                    if denom.is_one() {
                        continue;
                    }
                    let (base, s) = match prime_power(&denom) {
                        Some(ps) => ps,
                        None => continue,
                    };
                    let found_p = match base.to_u64() {
                        Some(q) if is_odd_prime_u64(q) => q,
                        _ => continue,
                    };
                    if let Some(wanted) = p {
                        if found_p != wanted {
                            continue;
                        }
                    }
                    if let Some(solution) = verify_solution(d, found_p, s, &a1, &a3, a2.numer()) {
                        hits.push(solution);
                    }
                }
                hits
            })
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for solution in found {
        let key = (
            solution.p,
            solution.s,
            solution.a1.clone(),
            solution.a3.clone(),
        );
        if seen.insert(key) {
            out.push(solution);
        }
    }
    out.sort_by_key(|sol| (sol.p, sol.a1.abs(), sol.a1.clone(), sol.a3.clone()));
    Ok(out)
}

/// Upper bound on p^s over solutions with class gcd `k`:
/// k ((d+1)^{3/2} + 2d) / |d+1|_p^2, with the 3/2 power bounded above by
/// isqrt((d+1)^3) + 1 so the result is an exact integer bound.
pub fn bound_ps(d: u64, class_gcd: u64, p: u64) -> Result<BigInt> {
    if !is_odd_prime_u64(p) {
        return Err(Error::InvalidPrime(p));
    }
    let d_plus_1 = BigInt::from(d) + BigInt::one();
    let cube = &d_plus_1 * &d_plus_1 * &d_plus_1;
    let root_bound = cube.sqrt() + BigInt::one();
    let vp = int_valuation(&d_plus_1, p) as u32;
    let scale = BigInt::from(p).pow(2 * vp);
    Ok(BigInt::from(class_gcd) * (root_bound + BigInt::from(2 * d)) * scale)
}

/// f_n(a) for the recurrence f_0 = 1, f_1 = -2a^3 + 2a^2 - 2a + 1,
/// f_{n+2} = 2(2a^2 + 1) f_{n+1} - f_n.
pub fn f_poly(n: u32, a: i64) -> BigInt {
    let a = BigInt::from(a);
    let mut prev = BigInt::one();
    if n == 0 {
        return prev;
    }
    let mut cur = -BigInt::from(2) * &a * &a * &a + BigInt::from(2) * &a * &a
        - BigInt::from(2) * &a
        + BigInt::one();
    let coeff = BigInt::from(2) * (BigInt::from(2) * &a * &a + BigInt::one());
    for _ in 1..n {
        let next = &coeff * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The d = a^2 + 1 family: for n = 1..max_n, when |f_n(a)| is an odd prime
/// power p^s (p < 2^64), the point (a u*_n, a/f_n(a), a v*_n) is a
/// convergent expansion of sqrt(a^2 + 1).
pub fn family_a2_plus_1(a: i64, max_n: u32) -> Result<Vec<Radical03Solution>> {
    if a < 1 {
        return Err(Error::Invalid(format!("a must be >= 1, got {a}")));
    }
    let d = a
        .checked_mul(a)
        .and_then(|sq| sq.checked_add(1))
        .ok_or_else(|| Error::Invalid("a^2 + 1 overflows".into()))?;
    let big_a = BigInt::from(a);
    let big_d = BigInt::from(d);
    // fundamental solution (2a^2 + 1, 2a) of x^2 - d y^2 = 1
    let u1 = BigInt::from(2) * &big_a * &big_a + BigInt::one();
    let v1 = BigInt::from(2) * &big_a;
    let mut u = u1.clone();
    let mut v = v1.clone();
    let mut out = Vec::new();
    for n in 1..=max_n {
        let f = f_poly(n, a);
        debug_assert_eq!(f, &u - &big_d * &v, "f_n(a) tracks u*_n - d v*_n");
        if let Some((base, s)) = prime_power(&f.magnitude().clone()) {
            if let Some(p) = base.to_u64() {
                if is_odd_prime_u64(p) {
                    let a1 = &big_a * &u;
                    let a3 = &big_a * &v;
                    // a2 = a / f_n(a); gcd(a, f_n(a)) = 1
                    let v_div = if f.is_negative() {
                        -big_a.clone()
                    } else {
                        big_a.clone()
                    };
                    if let Some(solution) = verify_solution(d, p, s, &a1, &a3, &v_div) {
                        out.push(solution);
                    }
                }
            }
        }
        let u_next = &u1 * &u + &big_d * &v1 * &v;
        let v_next = &v1 * &u + &u1 * &v;
        u = u_next;
        v = v_next;
    }
    Ok(out)
}

/// The negative-Pell family: when x^2 - d y^2 = -1 is solvable, walk its
/// positive solutions (s_n, t_n) and emit the pair of points
/// (+-p + d t_n, -+1/p, +-p + t_n) whenever |s_n| is an odd prime p.
///
/// `max_members` caps the number of primes collected (the recurrence index
/// is unbounded: s_1 divides every s_n, so for |s_1| > 1 only the first
/// step can produce a prime, while for |s_1| = 1 primes keep appearing at
/// sparse indices). Iteration stops once s_n no longer fits in 64 bits,
/// the modulus type of this crate.
pub fn family_neg_pell(d: u64, max_members: u32) -> Result<Vec<Radical03Solution>> {
    let (s1, t1) = neg_pell_checked(d)?;
    let big_d = BigInt::from(d);
    let u1 = &s1 * &s1 + &big_d * &t1 * &t1;
    let v1 = BigInt::from(2) * &s1 * &t1;
    // s_1 divides every s_n, so primes beyond the first index require
    // |s_1| = 1
    let only_first = !s1.magnitude().is_one();
    let mut s = s1;
    let mut t = t1;
    let mut out = Vec::new();
    let mut found = 0u32;
    let cap = BigInt::from(u64::MAX);
    for _ in 0..512 {
        if found >= max_members || s.abs() > cap {
            break;
        }
        if let Some(p) = s.magnitude().to_u64() {
            if is_odd_prime_u64(p) {
                found += 1;
                let big_p = BigInt::from(p);
                for sign in [1i64, -1] {
                    let signed_p = BigInt::from(sign) * &big_p;
                    let a1 = &signed_p + &big_d * &t;
                    let a3 = &signed_p + &t;
                    // a2 = -sign/p
                    let v = BigInt::from(-sign);
                    if let Some(solution) = verify_solution(d as i64, p, 1, &a1, &a3, &v) {
                        out.push(solution);
                    }
                }
            }
        }
        if only_first {
            break;
        }
        let s_next = &u1 * &s + &big_d * &v1 * &t;
        let t_next = &v1 * &s + &u1 * &t;
        s = s_next;
        t = t_next;
    }
    out.sort_by_key(|sol| (sol.p, sol.a1.abs(), sol.a1.clone(), sol.a3.clone()));
    Ok(out)
}

fn neg_pell_checked(d: u64) -> Result<(BigInt, BigInt)> {
    crate::pell::neg_pell(d)?.ok_or(Error::NoNegativePell(d))
}

/// The degenerate coefficient patterns of type (0,3): at least one of A,
/// B, C vanishes.
///
/// - A = B = 0 or B = C = 0: the variety has no Z[1/p]-points.
/// - A = C = 0: the family (a, -1/a, a) over units a, never convergent.
/// - A = 0, BC != 0 (and the mirror C = 0, AB != 0): writing the coprime
///   integer form of (B, C) and B = p^k B1 with p not dividing B1, points
///   exist iff the order of p mod |B1| is a multiple of 4, say 4s; the
///   exponents of the valid a3 = +-p^l are the odd multiples l = s(1+2t),
///   sampled here for |t| <= index_bound. The convergent points are those
///   with v_p(a3) < 0 and a3 != B/C (resp. v_p(a1) > 0 and a1 != -B/A).
pub fn degenerate_0_3(f: &QuadPoly, p: u64, index_bound: u32) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    let (a, b, c) = (f.a(), f.b(), f.c());
    let mut result = LocusResult {
        points: Vec::new(),
        families: Vec::new(),
        complete: true,
        notes: Vec::new(),
    };
    if a.is_zero() && b.is_zero() {
        result.notes.push("A = B = 0: a2^2 = -1 is impossible".into());
        return Ok(result);
    }
    if b.is_zero() && c.is_zero() {
        result.notes.push("B = C = 0: no Z[1/p] points".into());
        return Ok(result);
    }
    if a.is_zero() && c.is_zero() {
        result.families.push(FamilyDescriptor {
            kind: "unit-diagonal".into(),
            description: "(a, -1/a, a) for units a of Z[1/p]; never convergent".into(),
        });
        result.complete = false;
        let big_p = BigInt::from(p);
        for l in -(index_bound as i64)..=(index_bound as i64) {
            let unit = power_of_p(&big_p, l);
            for sign in [1i64, -1] {
                let a_val = rat_int(sign) * &unit;
                let coords = vec![a_val.clone(), -a_val.recip(), a_val.clone()];
                result.points.push(make_locus_point(coords, f, p)?);
            }
        }
        result.points.sort_by(|x, y| x.coords.cmp(&y.coords));
        return Ok(result);
    }
    if !a.is_zero() && !b.is_zero() && !c.is_zero() {
        return Err(Error::NotDegenerate);
    }
    let mirrored = c.is_zero();
    // reduce (B, C) (or (B, A) in the mirror) to coprime integers
    let pair = if mirrored {
        QuadPoly::new(Rational::zero(), b.clone(), a.clone())
    } else {
        QuadPoly::new(Rational::zero(), b.clone(), c.clone())
    };
    let (_, b_int, other_int) = pair.primitive_integer(true);
    let big_p = BigInt::from(p);
    let mut b1_part = b_int.clone();
    while b1_part.is_multiple_of(&big_p) {
        b1_part /= &big_p;
    }
    let b1_abs = b1_part.magnitude().clone();
    let exponents: Vec<i64> = if b1_abs <= BigUint::from(2u32) {
        // B1 in {1, 2} divides a3^2 + 1 for every exponent
        (-(index_bound as i64)..=(index_bound as i64)).collect()
    } else {
        let order = multiplicative_order(&BigUint::from(p), &b1_abs)
            .ok_or_else(|| Error::Internal("p shares a factor with B1".into()))?;
        if (&order % BigUint::from(4u32)) != BigUint::zero() {
            result.notes.push(format!(
                "order of {p} mod {b1_abs} is {order}, not a multiple of 4: empty"
            ));
            return Ok(result);
        }
        let s = (order / BigUint::from(4u32)).to_i64().ok_or_else(|| {
            Error::Invalid("order of p mod B1 too large".into())
        })?;
        (-(index_bound as i64)..=(index_bound as i64))
            .map(|t| s * (1 + 2 * t))
            .collect()
    };
    result.complete = false;
    result.families.push(FamilyDescriptor {
        kind: if mirrored { "c-zero" } else { "a-zero" }.into(),
        description: if mirrored {
            "(+-p^l, -+p^-l, A/B (p^{2l}+1) +- p^l) over admissible exponents l".into()
        } else {
            "(-C/B (p^{2l}+1) +- p^l, -+p^-l, +-p^l) over admissible exponents l".into()
        },
    });
    let ratio = Rational::new(other_int.clone(), b_int.clone());
    for l in exponents {
        let unit = power_of_p(&big_p, l);
        for sign in [1i64, -1] {
            let outer = rat_int(sign) * &unit;
            let inner = -outer.clone().recip();
            let third = if mirrored {
                &ratio * (&outer * &outer + Rational::one()) + &outer
            } else {
                -(&ratio * (&outer * &outer + Rational::one())) + &outer
            };
            if !crate::exact::in_z_one_over_p_unchecked(&third, p) {
                continue;
            }
            let coords = if mirrored {
                vec![outer.clone(), inner.clone(), third.clone()]
            } else {
                vec![third.clone(), inner.clone(), outer.clone()]
            };
            result.points.push(make_locus_point(coords, f, p)?);
        }
    }
    result.points.sort_by(|x, y| x.coords.cmp(&y.coords));
    Ok(result)
}

fn power_of_p(big_p: &BigInt, l: i64) -> Rational {
    if l >= 0 {
        Rational::from_integer(big_p.pow(l as u32))
    } else {
        Rational::new(BigInt::one(), big_p.pow((-l) as u32))
    }
}

fn make_locus_point(coords: Vec<Rational>, f: &QuadPoly, p: u64) -> Result<LocusPoint> {
    let pcf = Pcf::new(p, Vec::new(), coords.clone())?;
    let membership = variety_membership(&pcf, f)?;
    if !membership.equations_hold {
        return Err(Error::Internal(format!(
            "degenerate family point {coords:?} is off the variety"
        )));
    }
    let convergent = check_convergence(&pcf).convergent;
    let value = if convergent {
        Some(limit(&pcf, crate::loci::DEFAULT_LIMIT_PRECISION)?)
    } else {
        None
    };
    Ok(LocusPoint {
        coords,
        convergent,
        limit: value,
        zero_quad: membership.zero_quad,
    })
}
