//! Z[1/p]-points of the PCF varieties of types (0,1), (1,1), (2,1), (0,2)
//! and (1,2), together with their p-adically convergent subsets.
//!
//! Types (0,1), (1,1) and (0,2) have closed-form classifications; (2,1)
//! with vanishing leading coefficient reduces to a divisor pattern of B,
//! and the remaining cases are genuinely Diophantine, so the scans are
//! bounded and marked incomplete.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

use crate::cf::{variety_membership, Pcf};
use crate::convergence::{check_convergence, limit, Limit};
use crate::error::{Error, Result};
use crate::exact::{
    in_z_one_over_p_unchecked, padic_valuation_unchecked, rat_int, rational_sqrt, Rational,
    Valuation,
};
use crate::quad::QuadPoly;

/// Unit digits attached to limits of enumerated points.
pub const DEFAULT_LIMIT_PRECISION: u32 = 8;

/// One enumerated point of a variety, tagged with its convergence status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusPoint {
    /// The tuple (b_1..b_N, a_1..a_k).
    pub coords: Vec<Rational>,
    pub convergent: bool,
    /// The p-adic value of the expansion, when convergent.
    pub limit: Option<Limit>,
    /// The point's Quad is the zero triple (it satisfies the variety
    /// equations trivially and never converges).
    pub zero_quad: bool,
}

/// A symbolic one-parameter component of a variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyDescriptor {
    pub kind: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusResult {
    pub points: Vec<LocusPoint>,
    pub families: Vec<FamilyDescriptor>,
    /// True iff the enumeration is provably exhaustive.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl LocusResult {
    fn empty(complete: bool) -> Self {
        LocusResult {
            points: Vec::new(),
            families: Vec::new(),
            complete,
            notes: Vec::new(),
        }
    }

    pub fn convergent_points(&self) -> impl Iterator<Item = &LocusPoint> {
        self.points.iter().filter(|pt| pt.convergent)
    }
}

impl Serialize for LocusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LocusPoint", 4)?;
        let coords: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        s.serialize_field("point", &coords)?;
        s.serialize_field("convergent", &self.convergent)?;
        s.serialize_field("limit", &self.limit)?;
        s.serialize_field("zeroQuad", &self.zero_quad)?;
        s.end()
    }
}

impl Serialize for LocusResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LocusResult", 4)?;
        s.serialize_field("complete", &self.complete)?;
        s.serialize_field("points", &self.points)?;
        s.serialize_field("families", &self.families)?;
        s.serialize_field("notes", &self.notes)?;
        s.end()
    }
}

fn family(kind: &str, description: String) -> FamilyDescriptor {
    FamilyDescriptor {
        kind: kind.to_string(),
        description,
    }
}

/// Build the tagged point for coordinates split as N preperiod entries and
/// k period entries, verifying variety membership on the way.
fn make_point(coords: Vec<Rational>, n_pre: usize, f: &QuadPoly, p: u64) -> Result<LocusPoint> {
    let pcf = Pcf::new(p, coords[..n_pre].to_vec(), coords[n_pre..].to_vec())?;
    let membership = variety_membership(&pcf, f)?;
    if !membership.equations_hold {
        return Err(Error::Internal(format!(
            "constructed point {coords:?} is off the variety"
        )));
    }
    let convergent = check_convergence(&pcf).convergent;
    let value = if convergent {
        Some(limit(&pcf, DEFAULT_LIMIT_PRECISION)?)
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

fn vp(x: &Rational, p: u64) -> Valuation {
    padic_valuation_unchecked(x, p)
}

fn in_ring(x: &Rational, p: u64) -> bool {
    in_z_one_over_p_unchecked(x, p)
}

fn sort_points(points: &mut Vec<LocusPoint>) {
    points.sort_by(|a, b| a.coords.cmp(&b.coords));
    points.dedup_by(|a, b| a.coords == b.coords);
}

/// Type (0,1): V is the single point -B/A when A = -C != 0 and B/A lies in
/// the ring; it converges iff |B|_p > |A|_p, to the root of F of absolute
/// value > 1. When F is also reducible over Q the root pair has the shape
/// {x, -1/x} with x a p-power unit, which is reported as a note.
pub fn locus_0_1(f: &QuadPoly, p: u64) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    if f.a().is_zero() || !(f.a() + f.c()).is_zero() {
        return Ok(LocusResult::empty(true));
    }
    let point = -(f.b() / f.a());
    if !in_ring(&point, p) {
        return Ok(LocusResult::empty(true));
    }
    let mut result = LocusResult::empty(true);
    let pt = make_point(vec![point], 0, f, p)?;
    debug_assert_eq!(pt.convergent, vp(f.b(), p) < vp(f.a(), p));
    if pt.convergent {
        if let Some(r) = rational_sqrt(&f.discriminant()) {
            // reducible case: the roots are a p-power unit and its negated
            // inverse; report the member of large absolute value
            let mut root = (&r - f.b()) / (rat_int(2) * f.a());
            if let Valuation::Finite(v) = vp(&root, p) {
                if v > 0 {
                    root = -root.recip();
                }
                result.notes.push(format!(
                    "reducible: root multiset {{x, -1/x}} with x = {root}, alpha = {}",
                    v.abs()
                ));
            }
        }
    }
    result.points.push(pt);
    Ok(result)
}

/// Type (1,1): points exist iff A != 0, B/A and C/A lie in the ring, and
/// B^2 - 4A(A+C) is a rational square; then V(O) is the involution pair
/// {(b1, 2b1 + B/A), (-B/A - b1, -2b1 - B/A)} for b1 a root of F(x) + A,
/// and both points converge (to the two roots of F) iff
/// |B^2 - 4A(A+C)|_p > |A^2|_p.
pub fn locus_1_1(f: &QuadPoly, p: u64) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    if f.a().is_zero() {
        return Ok(LocusResult::empty(true));
    }
    let b_over_a = f.b() / f.a();
    let c_over_a = f.c() / f.a();
    if !in_ring(&b_over_a, p) || !in_ring(&c_over_a, p) {
        return Ok(LocusResult::empty(true));
    }
    let shifted_disc = f.b() * f.b() - rat_int(4) * f.a() * (f.a() + f.c());
    let root = match rational_sqrt(&shifted_disc) {
        Some(r) => r,
        None => return Ok(LocusResult::empty(true)),
    };
    let two_a = rat_int(2) * f.a();
    let b1 = (&root - f.b()) / &two_a;
    if !in_ring(&b1, p) {
        // cannot happen for ring-coefficient data (Z[1/p] is integrally
        // closed) but guard against pathological inputs
        return Ok(LocusResult::empty(true));
    }
    let a1 = rat_int(2) * &b1 + &b_over_a;
    let mut result = LocusResult::empty(true);
    let first = vec![b1.clone(), a1.clone()];
    let second = vec![-&b_over_a - &b1, -&a1];
    let mut points = vec![make_point(first, 1, f, p)?];
    if points[0].coords != second {
        points.push(make_point(second, 1, f, p)?);
    }
    for pt in &points {
        debug_assert_eq!(
            pt.convergent,
            vp(&shifted_disc, p) < vp(&(f.a() * f.a()), p)
        );
    }
    result.points = points;
    sort_points(&mut result.points);
    Ok(result)
}

/// Type (2,1) with A = 0: after scaling F to coprime integers with B > 0,
/// V(O) is nonempty iff B = p^beta (p^{2 alpha} + 1) and p^{2 alpha} + 1
/// divides C + eps p^{alpha + beta}; for alpha > 0 the two points converge
/// to infinity and to -C/B, for alpha = 0 nothing converges.
fn locus_2_1_linear(f: &QuadPoly, p: u64) -> Result<LocusResult> {
    let (_, b, c) = f.primitive_integer(true);
    if b.is_zero() {
        let mut result = LocusResult::empty(true);
        result
            .notes
            .push("A = B = 0 forces b2^2 + 1 = 0, which has no solutions".into());
        return Ok(result);
    }
    let mut result = LocusResult::empty(true);
    let big_p = BigInt::from(p);
    let mut decompositions = Vec::new();
    let mut power = BigInt::one(); // p^{2 alpha}
    let mut alpha = 0u32;
    loop {
        let divisor = &power + BigInt::one();
        if divisor > b {
            break;
        }
        if (&b % &divisor).is_zero() {
            let mut cofactor = &b / &divisor;
            let mut beta = 0u32;
            while (&cofactor % &big_p).is_zero() {
                cofactor /= &big_p;
                beta += 1;
            }
            if cofactor.is_one() {
                decompositions.push((alpha, beta, divisor.clone()));
            }
        }
        power *= &big_p * &big_p;
        alpha += 1;
    }
    if decompositions.iter().filter(|(a, _, _)| *a > 0).count() > 1 {
        result.notes.push(
            "multiple B = p^beta (p^{2 alpha} + 1) decompositions with alpha > 0; \
             expected unique"
                .into(),
        );
    }
    for (alpha, beta, divisor) in &decompositions {
        for eps in [1i64, -1] {
            let shifted = &c + BigInt::from(eps) * big_p.pow(alpha + beta);
            if !(&shifted % divisor).is_zero() {
                continue;
            }
            let k = Rational::from_integer(&shifted / divisor);
            let b1 = -(&k / Rational::from_integer(big_p.pow(*beta)));
            let p_alpha = Rational::from_integer(big_p.pow(*alpha));
            let eps = rat_int(eps);
            if *alpha > 0 {
                let a1 = &eps * (&p_alpha - p_alpha.recip());
                for (b2, a1) in [
                    (&eps * &p_alpha, a1.clone()),
                    (&eps * p_alpha.recip(), -&a1),
                ] {
                    result
                        .points
                        .push(make_point(vec![b1.clone(), b2, a1], 2, f, p)?);
                }
            } else {
                result
                    .points
                    .push(make_point(vec![b1, eps.clone(), rat_int(0)], 2, f, p)?);
            }
        }
    }
    sort_points(&mut result.points);
    Ok(result)
}

/// Type (2,1): closed form for A = 0, bounded scan over b2 otherwise.
///
/// For A != 0 each candidate b2 = m/p^j (|m| <= height, |j| <= val_depth)
/// is pushed through the defining conic to rational b1 candidates and the
/// recovered a1; the scan result carries `complete = false`. The locus is
/// provably empty when the discriminant is <= 0 or equals 4A^2.
pub fn locus_2_1(f: &QuadPoly, p: u64, height: u64, val_depth: u32) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    if f.a().is_zero() {
        return locus_2_1_linear(f, p);
    }
    let disc = f.discriminant();
    let four_a_sq = rat_int(4) * f.a() * f.a();
    if !disc.is_positive() || disc == four_a_sq {
        let mut result = LocusResult::empty(true);
        result
            .notes
            .push("empty: discriminant <= 0 or equal to 4A^2".into());
        return Ok(result);
    }
    let mut candidates = BTreeSet::new();
    let big_p = BigInt::from(p);
    for j in -(val_depth as i64)..=(val_depth as i64) {
        let scale = if j >= 0 {
            Rational::new(BigInt::one(), big_p.pow(j as u32))
        } else {
            Rational::from_integer(big_p.pow((-j) as u32))
        };
        for m in 1..=height {
            let m = rat_int(m as i64);
            candidates.insert(&m * &scale);
            candidates.insert(-(&m * &scale));
        }
    }
    let found: Vec<Vec<Rational>> = candidates
        .into_par_iter()
        .flat_map_iter(|b2| points_over_b2(f, p, &b2).into_iter())
        .collect();
    let mut result = LocusResult::empty(false);
    for coords in found {
        result.points.push(make_point(coords, 2, f, p)?);
    }
    sort_points(&mut result.points);
    Ok(result)
}

/// Solve the (2,1) conic for b1 at a fixed b2 and recover a1.
fn points_over_b2(f: &QuadPoly, p: u64, b2: &Rational) -> Vec<Vec<Rational>> {
    let (a, b, c) = (f.a(), f.b(), f.c());
    let one = Rational::one();
    let two = rat_int(2);
    let b2_sq_plus_1 = b2 * b2 + &one;
    // A(b1^2 b2^2 + 2 b1 b2 + b1^2 + 1) + B(b1 b2^2 + b1 + b2) + C(b2^2+1) = 0
    let q2 = a * &b2_sq_plus_1;
    let q1 = &two * a * b2 + b * &b2_sq_plus_1;
    let q0 = a + b * b2 + c * &b2_sq_plus_1;
    let disc = &q1 * &q1 - rat_int(4) * &q2 * &q0;
    let root = match rational_sqrt(&disc) {
        Some(r) => r,
        None => return Vec::new(),
    };
    let mut out = Vec::new();
    let mut b1_candidates = vec![(-&q1 + &root) / (&two * &q2)];
    if !root.is_zero() {
        b1_candidates.push((-&q1 - &root) / (&two * &q2));
    }
    for b1 in b1_candidates {
        if !in_ring(&b1, p) {
            continue;
        }
        // a1 from the first defining equation; the denominator is nonzero
        // on variety points
        let num = &two * a * &b1 * b2 * b2 + b * b2 * b2 - &two * a * &b1 + &two * a * b2 - b;
        let den = &two * a * &b1 * b2 + b * b2 + a;
        if den.is_zero() {
            continue;
        }
        let a1 = &num / &den;
        if !in_ring(&a1, p) {
            continue;
        }
        out.push(vec![b1, b2.clone(), a1]);
    }
    out
}

/// Type (0,2): the full classification.
///
/// Families appear for A = B = 0 (the a2 = 0 axis) and A != 0, B = C = 0
/// (the a1 = 0 axis); for ABC != 0 with B/A, B/C in the ring the points are
/// (0,0) and (-B/A, B/C), and the latter is the whole convergent locus
/// exactly when |B|^2_p > |AC|_p.
pub fn locus_0_2(f: &QuadPoly, p: u64) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    let (a, b, c) = (f.a(), f.b(), f.c());
    let mut result = LocusResult::empty(true);
    if a.is_zero() && b.is_zero() {
        result.families.push(family(
            "a2-axis",
            "(a1, 0) for a1 in Z[1/p]; none convergent".into(),
        ));
        return Ok(result);
    }
    if !a.is_zero() && b.is_zero() && c.is_zero() {
        result.families.push(family(
            "a1-axis",
            "(0, a2) for a2 in Z[1/p]; none convergent".into(),
        ));
        return Ok(result);
    }
    let origin = make_point(vec![rat_int(0), rat_int(0)], 0, f, p)?;
    result.points.push(origin);
    let abc_nonzero = !a.is_zero() && !b.is_zero() && !c.is_zero();
    if abc_nonzero {
        let minus_b_over_a = -(b / a);
        let b_over_c = b / c;
        if in_ring(&minus_b_over_a, p) && in_ring(&b_over_c, p) {
            let pt = make_point(vec![minus_b_over_a, b_over_c], 0, f, p)?;
            debug_assert_eq!(pt.convergent, vp(&(b * b), p) < vp(&(a * c), p));
            if pt.convergent && (a + c).is_zero() {
                result
                    .notes
                    .push("A = -C: the convergent expansion degenerates to type (0,1)".into());
            }
            result.points.push(pt);
        }
    }
    sort_points(&mut result.points);
    Ok(result)
}

/// Whether a1 a2 has the reducible-case shape +-(p^k - 1)^2 / (4^eps p^k)
/// for some k > 0 and eps in {0, 1}.
pub fn reducible_0_2_form(point: (&Rational, &Rational), p: u64) -> Result<bool> {
    crate::exact::check_odd_prime(p)?;
    let product = point.0 * point.1;
    if product.is_zero() {
        return Ok(false);
    }
    let k = match vp(&product, p) {
        Valuation::Finite(v) if v < 0 => (-v) as u32,
        _ => return Ok(false),
    };
    let p_pow = BigInt::from(p).pow(k);
    if *product.denom() != p_pow {
        return Ok(false);
    }
    let numer = product.numer().abs();
    let t = &p_pow - BigInt::one();
    let half = &t / BigInt::from(2);
    Ok(numer == &t * &t || numer == &half * &half)
}

/// The relation cutting out the (a1, a2)-projection of V(F)_{1,2}:
/// A^2 a2 (a1 a2 + 4) = (B^2 - 4AC) a1.
pub fn relation_1_2_holds(f: &QuadPoly, a1: &Rational, a2: &Rational) -> bool {
    let lhs = f.a() * f.a() * a2 * (a1 * a2 + rat_int(4));
    let rhs = f.discriminant() * a1;
    lhs == rhs
}

/// Type (1,2) at a single b1: if F'(b1)/F(b1) lies in the ring, B/A lies in
/// the ring, and |F'(b1)|^2_p > |A|_p |F(b1)|_p, the convergent pair is
/// (b1, -F'(b1)/F(b1), F'(b1)/A) and its involution image
/// (-b1 - B/A, F'(b1)/F(b1), -F'(b1)/A); otherwise the result is empty.
/// This single-b1 query is exhaustive.
pub fn locus_1_2_at(f: &QuadPoly, p: u64, b1: &Rational) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    if f.a().is_zero() {
        return Err(Error::ZeroLeadingCoeff);
    }
    if !in_ring(b1, p) {
        return Err(Error::NotInRing {
            value: b1.clone(),
            p,
        });
    }
    let value = f.eval(b1);
    if value.is_zero() {
        return Err(Error::RootInput);
    }
    let slope = f.derivative_at(b1);
    let b_over_a = f.b() / f.a();
    let mut result = LocusResult::empty(true);
    let a1 = -(&slope / &value);
    let conditions = in_ring(&a1, p)
        && in_ring(&b_over_a, p)
        && vp(&(&slope * &slope), p) < vp(&(f.a() * &value), p);
    if !conditions {
        return Ok(result);
    }
    let a2 = &slope / f.a();
    let first = vec![b1.clone(), a1.clone(), a2.clone()];
    let second = vec![-b1 - &b_over_a, -a1, -a2];
    result.points.push(make_point(first, 1, f, p)?);
    result.points.push(make_point(second, 1, f, p)?);
    sort_points(&mut result.points);
    Ok(result)
}

/// Type (1,2) bounded scan over b1 = m/p^j with |m| <= height and
/// 0 <= j <= val_depth, pruned by |b1|_p <= max(|B/A|_p, |C/A|^{1/2}_p).
///
/// Families record the components of V(F)_{1,2} that never converge: the
/// line a1 = a2 = 0 and, for square F, the line b1 = -B/2A, a2 = 0 and the
/// a1 a2 = -4 curve. The point list carries `complete = false`.
pub fn locus_1_2_scan(f: &QuadPoly, p: u64, height: u64, val_depth: u32) -> Result<LocusResult> {
    f.ensure_nonzero()?;
    crate::exact::check_odd_prime(p)?;
    let mut result = LocusResult::empty(false);
    result.families.push(family(
        "line-r1",
        "(b1, 0, 0) for b1 in Z[1/p]; never convergent".into(),
    ));
    if f.a().is_zero() {
        if f.b().is_zero() {
            result.families.push(family(
                "plane-a1-zero",
                "(b1, 0, a2) for b1, a2 in Z[1/p]; never convergent".into(),
            ));
        }
        result
            .notes
            .push("A = 0: the convergent locus is empty".into());
        return Ok(result);
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        let b_over_a = f.b() / f.a();
        if in_ring(&(&b_over_a / rat_int(2)), p) {
            result.families.push(family(
                "line-r2",
                format!("({}, a1, 0) for a1 in Z[1/p]", -(&b_over_a) / rat_int(2)),
            ));
        }
        result.families.push(family(
            "curve-a1a2",
            "a1 a2 = -4, b1 = (a2 - B/A)/2 where the entries stay in Z[1/p]".into(),
        ));
        result
            .notes
            .push("zero discriminant: the convergent locus is empty".into());
        return Ok(result);
    }
    result.families.push(family(
        "tangent-curve",
        "(b1, -F'(b1)/F(b1), F'(b1)/A) for b1 in Z[1/p] with F(b1) != 0".into(),
    ));
    // |b1|_p <= max(|B/A|_p, |C/A|^{1/2}_p), i.e.
    // 2 v_p(b1) >= min(2 v_p(B/A), v_p(C/A))
    let prune_bound = {
        let vb = vp(&(f.b() / f.a()), p);
        let vc = vp(&(f.c() / f.a()), p);
        match (vb, vc) {
            (Valuation::Finite(vb), Valuation::Finite(vc)) => Some((2 * vb).min(vc)),
            (Valuation::Finite(vb), Valuation::Infinite) => Some(2 * vb),
            (Valuation::Infinite, Valuation::Finite(vc)) => Some(vc),
            (Valuation::Infinite, Valuation::Infinite) => None,
        }
    };
    let big_p = BigInt::from(p);
    let mut candidates = BTreeSet::new();
    for j in 0..=val_depth {
        let scale = Rational::new(BigInt::one(), big_p.pow(j));
        for m in 1..=height {
            let m = rat_int(m as i64);
            candidates.insert(&m * &scale);
            candidates.insert(-(&m * &scale));
        }
    }
    let survivors: Vec<Rational> = candidates
        .into_par_iter()
        .filter(|b1| {
            if let Some(bound) = prune_bound {
                if let Valuation::Finite(v) = vp(b1, p) {
                    if 2 * v < bound {
                        return false;
                    }
                }
            }
            !f.eval(b1).is_zero()
        })
        .collect();
    let mut points = Vec::new();
    for b1 in survivors {
        let sub = locus_1_2_at(f, p, &b1)?;
        points.extend(sub.points);
    }
    result.points = points;
    sort_points(&mut result.points);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, rat};

    fn coords(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn type_0_1_reducible_point() {
        // x^2 + (3 - 1/3)x - 1 at p = 3: single convergent point -8/3
        let f = QuadPoly::new(rat(1, 1), rat(8, 3), rat(-1, 1));
        let result = locus_0_1(&f, 3).unwrap();
        assert_eq!(result.points.len(), 1);
        let pt = &result.points[0];
        assert_eq!(pt.coords, coords(&["-8/3"]));
        assert!(pt.convergent);
        // the limit is the root of F with |.|_3 > 1, namely 1/3
        assert_eq!(pt.limit, Some(Limit::ExactRational(rat(1, 3))));
        assert!(result.complete);
        assert!(!result.notes.is_empty());
    }

    #[test]
    fn type_0_1_empty_and_nonconvergent() {
        let f = QuadPoly::from_ints(1, 1, 1);
        assert!(locus_0_1(&f, 3).unwrap().points.is_empty());

        let f = QuadPoly::from_ints(1, -3, -1);
        let result = locus_0_1(&f, 3).unwrap();
        assert_eq!(result.points[0].coords, coords(&["3"]));
        assert!(!result.points[0].convergent);
    }

    #[test]
    fn type_1_1_pairs() {
        // x^2 - 10/9 at p = 3: points +-(1/3, 2/3), both convergent
        let f = QuadPoly::new(rat(1, 1), rat(0, 1), rat(-10, 9));
        let result = locus_1_1(&f, 3).unwrap();
        assert_eq!(result.points.len(), 2);
        assert_eq!(result.points[0].coords, coords(&["-1/3", "-2/3"]));
        assert_eq!(result.points[1].coords, coords(&["1/3", "2/3"]));
        for pt in &result.points {
            assert!(pt.convergent);
            let value = pt.limit.as_ref().unwrap().as_padic().unwrap();
            assert!(value
                .square()
                .congruent_to_rational(&rat(10, 9), value.valuation() * 2 + 4));
        }

        // x^2 + 1: discriminant condition fails over Q
        let f = QuadPoly::from_ints(1, 0, 1);
        assert!(locus_1_1(&f, 3).unwrap().points.is_empty());

        // x^2 - 2 at p = 3: points exist but do not converge
        let f = QuadPoly::from_ints(1, 0, -2);
        let result = locus_1_1(&f, 3).unwrap();
        assert_eq!(result.points.len(), 2);
        assert!(result.points.iter().all(|pt| !pt.convergent));
    }

    #[test]
    fn type_2_1_linear_closed_form() {
        // F = 10x + 7 at p = 3: B = 3^0 (3^2 + 1), two convergent points
        let f = QuadPoly::from_ints(0, 10, 7);
        let result = locus_2_1(&f, 3, 10, 2).unwrap();
        assert!(result.complete);
        assert_eq!(result.points.len(), 2);
        assert_eq!(result.points[0].coords, coords(&["-1", "1/3", "-8/3"]));
        assert_eq!(result.points[1].coords, coords(&["-1", "3", "8/3"]));
        assert!(result.points.iter().all(|pt| pt.convergent));
        let limits: Vec<&Limit> = result
            .points
            .iter()
            .map(|pt| pt.limit.as_ref().unwrap())
            .collect();
        assert!(limits.contains(&&Limit::Infinity));
        assert!(limits.contains(&&Limit::ExactRational(rat(-7, 10))));
    }

    #[test]
    fn type_2_1_linear_empty() {
        // F = 2x + 6 reduces to B = 1, C = 3; 1 is not p^beta (p^{2a} + 1)
        let f = QuadPoly::from_ints(0, 2, 6);
        let result = locus_2_1(&f, 3, 10, 2).unwrap();
        assert!(result.points.is_empty() && result.complete);
    }

    #[test]
    fn type_2_1_negative_discriminant_short_circuits() {
        let f = QuadPoly::from_ints(1, 0, 1); // disc -4
        let result = locus_2_1(&f, 3, 10, 2).unwrap();
        assert!(result.points.is_empty() && result.complete);
        assert!(result.notes[0].contains("empty"));
    }

    #[test]
    fn type_2_1_scan_recovers_known_point() {
        // (1, 2, 8/3) lies on V(7x^2 - 10x) over Z[1/3]
        let f = QuadPoly::from_ints(7, -10, 0);
        let result = locus_2_1(&f, 3, 10, 1).unwrap();
        assert!(!result.complete);
        let hit = result
            .points
            .iter()
            .find(|pt| pt.coords == coords(&["1", "2", "8/3"]))
            .expect("scan finds the seeded point");
        assert!(hit.convergent);
    }

    #[test]
    fn type_0_2_classification() {
        // 3x^2 + x + 3 at p = 3: convergent point (-1/3, 1/3)
        let f = QuadPoly::from_ints(3, 1, 3);
        let result = locus_0_2(&f, 3).unwrap();
        assert_eq!(result.points.len(), 2);
        let pt = result
            .points
            .iter()
            .find(|pt| pt.convergent)
            .expect("one convergent point");
        assert_eq!(pt.coords, coords(&["-1/3", "1/3"]));

        // x^2: the a1 = 0 family
        let f = QuadPoly::from_ints(1, 0, 0);
        let result = locus_0_2(&f, 3).unwrap();
        assert!(result.points.is_empty());
        assert_eq!(result.families[0].kind, "a1-axis");

        // x^2 + x + 1 at p = 3: both classification points exist but
        // nothing converges (|B|^2 = |AC| = 1)
        let f = QuadPoly::from_ints(1, 1, 1);
        let result = locus_0_2(&f, 3).unwrap();
        assert_eq!(result.points.len(), 2);
        assert!(result.points.iter().all(|pt| !pt.convergent));
        assert!(result
            .points
            .iter()
            .any(|pt| pt.coords == coords(&["0", "0"]) && pt.zero_quad));
        assert!(result
            .points
            .iter()
            .any(|pt| pt.coords == coords(&["-1", "1"])));
    }

    #[test]
    fn reducible_0_2_shapes() {
        assert!(reducible_0_2_form((&rat(4, 3), &rat(1, 1)), 3).unwrap());
        assert!(reducible_0_2_form((&rat(16, 9), &rat(1, 1)), 3).unwrap());
        assert!(!reducible_0_2_form((&rat(5, 3), &rat(1, 1)), 3).unwrap());
    }

    #[test]
    fn type_1_2_at_examples() {
        let f = QuadPoly::from_ints(1, -12, 8);
        let result = locus_1_2_at(&f, 3, &rat(7, 1)).unwrap();
        assert_eq!(result.points.len(), 2);
        assert_eq!(result.points[0].coords, coords(&["5", "-2/27", "-2"]));
        assert_eq!(result.points[1].coords, coords(&["7", "2/27", "2"]));
        assert!(result.points.iter().all(|pt| pt.convergent));

        // b1 = 2: |F'(2)|^2 = 1 > |F(2)|_3 = 1/3, so this b1 also carries a
        // convergent pair, with the same limit set 6 +- 2 sqrt(7)
        let result = locus_1_2_at(&f, 3, &rat(2, 1)).unwrap();
        assert_eq!(result.points.len(), 2);
        assert_eq!(result.points[1].coords, coords(&["10", "2/3", "8"]));
        for pt in &result.points {
            assert!(pt.convergent);
            assert!(pt.limit.as_ref().unwrap().satisfies(&f, 3, 6));
        }

        // b1 = 9: F(9) = -19 is a unit, |F'(9)|^2 = 1/9 fails the strict
        // inequality, so the query is empty
        let result = locus_1_2_at(&f, 3, &rat(9, 1)).unwrap();
        assert!(result.points.is_empty());

        assert_eq!(
            locus_1_2_at(&QuadPoly::from_ints(0, 1, 1), 3, &rat(1, 1)),
            Err(Error::ZeroLeadingCoeff)
        );
        // F(b1) = 0 is rejected
        assert_eq!(
            locus_1_2_at(&QuadPoly::from_ints(1, 0, -4), 3, &rat(2, 1)),
            Err(Error::RootInput)
        );
    }

    #[test]
    fn type_1_2_scan_finds_the_example_points() {
        let f = QuadPoly::from_ints(1, -12, 8);
        let result = locus_1_2_scan(&f, 3, 20, 0).unwrap();
        let found: Vec<Vec<Rational>> =
            result.points.iter().map(|pt| pt.coords.clone()).collect();
        // the four points with period denominators 27 and 3 ...
        for expected in [
            coords(&["7", "2/27", "2"]),
            coords(&["5", "-2/27", "-2"]),
            coords(&["11", "10/3", "10"]),
            coords(&["1", "-10/3", "-10"]),
        ] {
            assert!(found.contains(&expected), "missing {expected:?}");
        }
        // ... plus the remaining integral b1 hits in the height window
        assert_eq!(
            found,
            vec![
                coords(&["-2", "4/9", "-16"]),
                coords(&["-1", "2/3", "-14"]),
                coords(&["1", "-10/3", "-10"]),
                coords(&["2", "-2/3", "-8"]),
                coords(&["5", "-2/27", "-2"]),
                coords(&["7", "2/27", "2"]),
                coords(&["10", "2/3", "8"]),
                coords(&["11", "10/3", "10"]),
                coords(&["13", "-2/3", "14"]),
                coords(&["14", "-4/9", "16"]),
            ]
        );
        assert!(result.points.iter().all(|pt| pt.convergent));
        assert!(!result.complete);
    }

    #[test]
    fn type_1_2_scan_a_zero_families_only() {
        let f = QuadPoly::from_ints(0, 1, 3);
        let result = locus_1_2_scan(&f, 3, 10, 1).unwrap();
        assert!(result.points.is_empty());
        assert_eq!(result.families[0].kind, "line-r1");
    }

    #[test]
    fn involution_property() {
        // every emitted (b1, a1, a2) comes with (-b1 - B/A, -a1, -a2) and
        // the two limits are the distinct roots of F
        let f = QuadPoly::from_ints(1, -12, 8);
        let result = locus_1_2_at(&f, 3, &rat(7, 1)).unwrap();
        let partner = coords(&["7", "2/27", "2"]);
        assert!(result.points.iter().any(|pt| pt.coords == partner));
        let l0 = result.points[0].limit.as_ref().unwrap().as_padic().unwrap();
        let l1 = result.points[1].limit.as_ref().unwrap().as_padic().unwrap();
        assert_ne!(l0, l1);
        for l in [l0, l1] {
            assert!(Limit::PAdic(l.clone()).satisfies(&f, 3, 6));
        }
    }

    #[test]
    fn relation_holds_on_constructed_points() {
        let f = QuadPoly::from_ints(1, -12, 8);
        let result = locus_1_2_at(&f, 3, &rat(7, 1)).unwrap();
        for pt in &result.points {
            assert!(relation_1_2_holds(&f, &pt.coords[1], &pt.coords[2]));
        }
    }

    #[test]
    fn locus_json_shape() {
        let f = QuadPoly::from_ints(1, -12, 8);
        let result = locus_1_2_at(&f, 3, &rat(9, 1)).unwrap();
        let json = serde_json::to_string(&result).unwrap();
        assert!(json.starts_with(r#"{"complete":true,"points":[]"#));
    }
}
