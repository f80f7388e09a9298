//! p-adic convergence of periodic continued fractions.
//!
//! Convergence depends only on the period. Writing T for the period matrix
//! M(a_1..a_k), the PCF converges p-adically iff
//!
//! (i)  |A_k + B_{k-1}|_p > 1 (the trace of T is p-adically large), and
//! (ii) for every cyclic shift a_j..a_{j+k-1} whose matrix has (2,1) entry
//!      exactly 0, the (2,2) entry has positive valuation.
//!
//! When the criterion holds the eigenvalues mu, nu of T satisfy
//! mu nu = (-1)^k with v_p(mu) = v_p(trace) < 0, and the limit is the root
//! of Quad(P) fixed by the dominant eigenvalue: a finite root beta is
//! dominant iff v_p(E21 beta + E22) < 0, and the root at infinity is
//! dominant iff v_p(E11) < 0.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cf::{cf_matrix_allow_empty, convergent_at, Mat2, Pcf};
use crate::error::{Error, Result};
use crate::exact::padic::{padic_quad_roots, PadicRoot, QuadRootsOutcome};
use crate::exact::{
    padic_valuation_unchecked, PAdicApprox, ProjPoint, Rational, Valuation,
};
use crate::quad::QuadPoly;
use num_traits::Zero;

/// Why the convergence criterion rejected a period, if it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCondition {
    None,
    /// Condition (i): the trace valuation is >= 0.
    TraceTooSmall,
    /// Condition (ii) failed at the given shift j (1-based).
    ShiftCondition(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub convergent: bool,
    /// A_k + B_{k-1} of the period.
    pub trace: Rational,
    pub trace_valuation: Valuation,
    pub failed_condition: FailedCondition,
}

impl Serialize for ConvergenceReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ConvergenceReport", 4)?;
        s.serialize_field("convergent", &self.convergent)?;
        s.serialize_field("trace", &self.trace.to_string())?;
        match self.trace_valuation {
            Valuation::Finite(v) => s.serialize_field("traceValuation", &v)?,
            Valuation::Infinite => s.serialize_field("traceValuation", &Option::<i64>::None)?,
        }
        match self.failed_condition {
            FailedCondition::None => s.serialize_field("failedCondition", "none")?,
            FailedCondition::TraceTooSmall => s.serialize_field("failedCondition", "trace")?,
            FailedCondition::ShiftCondition(j) => {
                #[derive(Serialize)]
                struct Shift {
                    shift: usize,
                }
                s.serialize_field("failedCondition", &Shift { shift: j })?
            }
        }
        s.end()
    }
}

/// Decide p-adic convergence of a PCF from its period alone.
pub fn check_convergence(pcf: &Pcf) -> ConvergenceReport {
    let p = pcf.prime();
    let k = pcf.period_len();
    let period_matrix = cf_matrix_allow_empty(pcf.period());
    let trace = period_matrix.trace();
    let trace_valuation = padic_valuation_unchecked(&trace, p);
    if !trace_valuation.is_negative() {
        return ConvergenceReport {
            convergent: false,
            trace,
            trace_valuation,
            failed_condition: FailedCondition::TraceTooSmall,
        };
    }
    for j in 1..=k {
        let shifted = cf_matrix_allow_empty(&pcf.period_shift(j));
        if shifted.e21.is_zero() {
            let v22 = padic_valuation_unchecked(&shifted.e22, p);
            if !matches!(v22, Valuation::Infinite) && v22.finite() <= 0 {
                return ConvergenceReport {
                    convergent: false,
                    trace,
                    trace_valuation,
                    failed_condition: FailedCondition::ShiftCondition(j),
                };
            }
        }
    }
    ConvergenceReport {
        convergent: true,
        trace,
        trace_valuation,
        failed_condition: FailedCondition::None,
    }
}

/// The value of a convergent PCF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    ExactRational(Rational),
    Infinity,
    PAdic(PAdicApprox),
}

impl Limit {
    pub fn as_padic(&self) -> Option<&PAdicApprox> {
        match self {
            Limit::PAdic(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Limit::ExactRational(x) => Some(x),
            _ => None,
        }
    }

    /// v_p(F(limit)) >= abs_exponent, i.e. the limit is a root of F to the
    /// stated modulus (exact check for rational limits).
    pub fn satisfies(&self, f: &QuadPoly, p: u64, abs_exponent: i64) -> bool {
        match self {
            Limit::ExactRational(x) => f.eval(x).is_zero(),
            Limit::Infinity => f.a().is_zero(),
            Limit::PAdic(x) => {
                debug_assert_eq!(x.prime(), p);
                let fx = (|| -> Result<PAdicApprox> {
                    let mut acc = x.square();
                    if !f.a().is_zero() {
                        acc = acc.mul_rational(f.a())?;
                    } else {
                        return Err(Error::Internal("degenerate evaluation".into()));
                    }
                    if !f.b().is_zero() {
                        acc = acc.add(&x.mul_rational(f.b())?)?;
                    }
                    acc.add_rational(f.c())
                })();
                match fx {
                    Ok(v) => v.valuation() >= abs_exponent,
                    // F(limit) vanished to working precision
                    Err(Error::PrecisionExhausted) => true,
                    Err(_) => false,
                }
            }
        }
    }
}

impl Serialize for Limit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "camelCase")]
        enum Repr<'a> {
            Rational { value: String },
            Infinity,
            Padic { value: &'a PAdicApprox },
        }
        let repr = match self {
            Limit::ExactRational(x) => Repr::Rational {
                value: x.to_string(),
            },
            Limit::Infinity => Repr::Infinity,
            Limit::PAdic(x) => Repr::Padic { value: x },
        };
        repr.serialize(serializer)
    }
}

/// A root of the period Quad together with enough data to pick the
/// dominant one.
enum PeriodRoot {
    Finite(RootValue),
    Infinity,
}

enum RootValue {
    Rational(Rational),
    Approx(PAdicApprox),
}

/// Compute the p-adic limit of a convergent PCF to `precision` unit digits.
///
/// The dominant root of the period Quad is selected by the eigenvalue
/// valuation test; for a nonempty preperiod the period limit is pushed
/// through the Moebius action of M(b_1..b_N). Precision loss triggers one
/// automatic retry at four times the requested digits.
pub fn limit(pcf: &Pcf, precision: u32) -> Result<Limit> {
    let report = check_convergence(pcf);
    if !report.convergent {
        return Err(Error::NotConvergent(pcf.prime()));
    }
    if precision == 0 {
        return Err(Error::Invalid("precision must be >= 1".into()));
    }
    let mut last = Error::PrecisionExhausted;
    for working in [precision, 4 * precision] {
        match limit_at_precision(pcf, working) {
            Ok(value) => {
                return Ok(match value {
                    Limit::PAdic(x) if x.precision() > precision => {
                        Limit::PAdic(x.truncate(precision))
                    }
                    other => other,
                })
            }
            Err(Error::PrecisionExhausted) => last = Error::PrecisionExhausted,
            Err(other) => return Err(other),
        }
    }
    Err(last)
}

fn limit_at_precision(pcf: &Pcf, working: u32) -> Result<Limit> {
    let p = pcf.prime();
    let e = cf_matrix_allow_empty(pcf.period());
    let root = dominant_root(&e, p, working)?;
    if pcf.preperiod().is_empty() {
        return Ok(match root {
            PeriodRoot::Infinity => Limit::Infinity,
            PeriodRoot::Finite(RootValue::Rational(x)) => Limit::ExactRational(x),
            PeriodRoot::Finite(RootValue::Approx(x)) => Limit::PAdic(x),
        });
    }
    let m = cf_matrix_allow_empty(pcf.preperiod());
    match root {
        PeriodRoot::Infinity => {
            // the image of [1:0] is [M11 : M21]
            if m.e21.is_zero() {
                Ok(Limit::Infinity)
            } else {
                Ok(Limit::ExactRational(&m.e11 / &m.e21))
            }
        }
        PeriodRoot::Finite(RootValue::Rational(x)) => {
            let num = &m.e11 * &x + &m.e12;
            let den = &m.e21 * &x + &m.e22;
            if den.is_zero() {
                Ok(Limit::Infinity)
            } else {
                Ok(Limit::ExactRational(num / den))
            }
        }
        PeriodRoot::Finite(RootValue::Approx(beta)) => {
            let num = affine_image(&beta, &m.e11, &m.e12)?;
            let den = affine_image(&beta, &m.e21, &m.e22)?;
            let out = match (num, den) {
                (AffineImage::Padic(n), AffineImage::Padic(d)) => n.div(&d),
                (AffineImage::Padic(n), AffineImage::Exact(d)) => {
                    n.mul_rational(&(Rational::from_integer(1.into()) / d))?
                }
                (AffineImage::Exact(n), AffineImage::Padic(d)) => d.inv().mul_rational(&n)?,
                (AffineImage::Exact(_), AffineImage::Exact(_)) => {
                    return Err(Error::Internal(
                        "irrational root with exact Moebius image".into(),
                    ))
                }
            };
            Ok(Limit::PAdic(out))
        }
    }
}

enum AffineImage {
    Exact(Rational),
    Padic(PAdicApprox),
}

/// c * beta + d with exact rational coefficients.
fn affine_image(beta: &PAdicApprox, c: &Rational, d: &Rational) -> Result<AffineImage> {
    if c.is_zero() {
        // beta is irrational, so d = 0 here would make the matrix singular
        return Ok(AffineImage::Exact(d.clone()));
    }
    let scaled = beta.mul_rational(c)?;
    Ok(AffineImage::Padic(scaled.add_rational(d)?))
}

/// Select the root of Quad fixed by the dominant eigenvalue of E.
fn dominant_root(e: &Mat2, p: u64, working: u32) -> Result<PeriodRoot> {
    let quad = QuadPoly::new(e.e21.clone(), &e.e22 - &e.e11, -e.e12.clone());
    if quad.is_zero() {
        // scalar period matrix; unreachable for convergent input
        return Err(Error::Internal("zero Quad for convergent period".into()));
    }
    if e.e21.is_zero() {
        // roots are infinity and E12/(E22 - E11); eigenvalues are E11, E22
        let v11 = padic_valuation_unchecked(&e.e11, p);
        if v11.is_negative() {
            return Ok(PeriodRoot::Infinity);
        }
        let diag = &e.e22 - &e.e11;
        if diag.is_zero() {
            return Err(Error::Internal(
                "repeated eigenvalue for convergent period".into(),
            ));
        }
        return Ok(PeriodRoot::Finite(RootValue::Rational(&e.e12 / &diag)));
    }
    match padic_quad_roots(&quad, p, working)? {
        QuadRootsOutcome::NotInQp => Err(Error::Internal(
            "discriminant not a p-adic square for convergent period".into(),
        )),
        QuadRootsOutcome::Roots(roots) => {
            let mut rational_roots = Vec::new();
            let mut approx_roots = Vec::new();
            for root in roots {
                match root {
                    PadicRoot::Rational(x) => rational_roots.push(x),
                    PadicRoot::Approx(x) => approx_roots.push(x),
                    PadicRoot::Infinity => {
                        return Err(Error::Internal("infinite root with E21 != 0".into()))
                    }
                }
            }
            if !rational_roots.is_empty() {
                for x in rational_roots {
                    let eigenvalue = &e.e21 * &x + &e.e22;
                    if padic_valuation_unchecked(&eigenvalue, p).is_negative() {
                        return Ok(PeriodRoot::Finite(RootValue::Rational(x)));
                    }
                }
                return Err(Error::Internal("no dominant rational root".into()));
            }
            for x in approx_roots {
                let eigenvalue = x.mul_rational(&e.e21)?.add_rational(&e.e22)?;
                if eigenvalue.valuation() < 0 {
                    return Ok(PeriodRoot::Finite(RootValue::Approx(x)));
                }
            }
            // the dominant eigenvalue was not visible at this precision
            Err(Error::PrecisionExhausted)
        }
    }
}

/// Result of the independent convergence cross-check.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub consistent: bool,
    /// The last convergent of the window.
    pub witness: ProjPoint,
    /// First window index whose consecutive distance fell short.
    pub first_failure: Option<usize>,
}

impl Serialize for OracleReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OracleReport", 3)?;
        s.serialize_field("consistent", &self.consistent)?;
        s.serialize_field(
            "witness",
            &[self.witness.x().to_string(), self.witness.y().to_string()],
        )?;
        s.serialize_field("firstFailure", &self.first_failure)?;
        s.end()
    }
}

/// Heuristic convergence check from exact convergents.
///
/// The distance test runs on the purely periodic tail: the full sequence
/// converges iff the tail does (the preperiod acts by an invertible
/// Moebius map, a homeomorphism of the projective line, and one that can
/// shrink chordal distances by a constant factor that would otherwise fake
/// stabilization at any fixed digit target). Convergents [A_n : B_n] of
/// the tail are computed for n in [n0, n1] and the chordal distance
/// valuation between consecutive convergents must reach `target_digits`
/// everywhere on the second half of the window; the first half only
/// flushes slow-start effects, since a convergent PCF gains digits
/// linearly in n while a divergent one stalls at a bounded distance. The
/// witness is the last convergent of the full continued fraction. This is
/// a consistency check, not a decision procedure.
pub fn oracle_converges(
    pcf: &Pcf,
    target_digits: i64,
    window: (usize, usize),
) -> Result<OracleReport> {
    let (n0, n1) = window;
    if n0 < 1 || n1 <= n0 {
        return Err(Error::Invalid(format!("bad window ({n0}, {n1})")));
    }
    let p = pcf.prime();
    let tail = Pcf::new(p, Vec::new(), pcf.period().to_vec())?;
    let points = convergents_in_window(&tail, n0, n1);
    let mid = n0 + (n1 - n0) / 2;
    let mut consistent = true;
    let mut first_failure = None;
    for n in mid..n1 {
        let i = n - n0;
        let delta = points[i].chordal_distance_valuation(&points[i + 1], p)?;
        let ok = match delta {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= target_digits,
        };
        if !ok {
            consistent = false;
            first_failure = Some(n);
            break;
        }
    }
    Ok(OracleReport {
        consistent,
        witness: convergent_at(pcf, n1),
        first_failure,
    })
}

/// One incremental pass collecting [A_n : B_n] for n in [n0, n1].
fn convergents_in_window(pcf: &Pcf, n0: usize, n1: usize) -> Vec<ProjPoint> {
    use num_traits::One;
    let mut collected = Vec::with_capacity(n1 - n0 + 1);
    let mut a_prev = Rational::one();
    let mut b_prev = Rational::zero();
    let mut a = pcf.quotient_at(1).clone();
    let mut b = Rational::one();
    if n0 == 1 {
        collected.push(ProjPoint::new(a.clone(), b.clone()).unwrap());
    }
    for n in 2..=n1 {
        let c = pcf.quotient_at(n);
        let a_next = &a * c + &a_prev;
        let b_next = &b * c + &b_prev;
        a_prev = a;
        b_prev = b;
        a = a_next;
        b = b_next;
        if n >= n0 {
            collected.push(ProjPoint::new(a.clone(), b.clone()).unwrap());
        }
    }
    collected
}
