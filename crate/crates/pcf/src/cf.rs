//! Continuant sequences, continued-fraction matrices, the E matrix of a
//! periodic continued fraction, its quadratic invariant, and PCF-variety
//! membership.
//!
//! For a sequence c_1, c_2, ... the continuants satisfy
//! A_n = A_{n-1} c_n + A_{n-2} and B_n = B_{n-1} c_n + B_{n-2}, with
//! A_0 = 1, A_1 = c_1, B_0 = 0, B_1 = 1, and the n-th convergent is the
//! projective point [A_n : B_n].

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{
    check_odd_prime, in_z_one_over_p_unchecked, parse_rational, ProjPoint, Rational,
};
use crate::quad::QuadPoly;

/// A 2x2 matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub e11: Rational,
    pub e12: Rational,
    pub e21: Rational,
    pub e22: Rational,
}

impl Mat2 {
    pub fn new(e11: Rational, e12: Rational, e21: Rational, e22: Rational) -> Self {
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn identity() -> Self {
        Mat2::new(
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        )
    }

    /// The single partial-quotient matrix D(c) = [[c, 1], [1, 0]].
    pub fn quotient(c: &Rational) -> Self {
        Mat2::new(c.clone(), Rational::one(), Rational::one(), Rational::zero())
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        Mat2::new(
            &self.e11 * &other.e11 + &self.e12 * &other.e21,
            &self.e11 * &other.e12 + &self.e12 * &other.e22,
            &self.e21 * &other.e11 + &self.e22 * &other.e21,
            &self.e21 * &other.e12 + &self.e22 * &other.e22,
        )
    }

    pub fn det(&self) -> Rational {
        &self.e11 * &self.e22 - &self.e12 * &self.e21
    }

    pub fn trace(&self) -> Rational {
        &self.e11 + &self.e22
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(
            self.e11.clone(),
            self.e21.clone(),
            self.e12.clone(),
            self.e22.clone(),
        )
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Invalid("matrix is singular".into()));
        }
        Ok(Mat2::new(
            &self.e22 / &det,
            -&self.e12 / &det,
            -&self.e21 / &det,
            &self.e11 / &det,
        ))
    }

    /// The Moebius action on a projective point: column vector transform.
    pub fn apply(&self, point: &ProjPoint) -> ProjPoint {
        let x = &self.e11 * point.x() + &self.e12 * point.y();
        let y = &self.e21 * point.x() + &self.e22 * point.y();
        ProjPoint::new(x, y).expect("invertible matrix maps points to points")
    }
}

/// Continuant sequences (A_0..A_n, B_0..B_n) of a partial-quotient list.
pub fn continuants(c: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut a = Vec::with_capacity(c.len() + 1);
    let mut b = Vec::with_capacity(c.len() + 1);
    a.push(Rational::one());
    b.push(Rational::zero());
    if c.is_empty() {
        return (a, b);
    }
    a.push(c[0].clone());
    b.push(Rational::one());
    for (n, cn) in c.iter().enumerate().skip(1) {
        let an = &a[n] * cn + &a[n - 1];
        let bn = &b[n] * cn + &b[n - 1];
        a.push(an);
        b.push(bn);
    }
    (a, b)
}

/// M(c_1..c_n) = [[A_n, A_{n-1}], [B_n, B_{n-1}]], the product of the
/// quotient matrices D_1 ... D_n.
pub fn cf_matrix(c: &[Rational]) -> Result<Mat2> {
    if c.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(cf_matrix_allow_empty(c))
}

pub(crate) fn cf_matrix_allow_empty(c: &[Rational]) -> Mat2 {
    let (a, b) = continuants(c);
    let n = c.len();
    if n == 0 {
        return Mat2::identity();
    }
    Mat2::new(
        a[n].clone(),
        a[n - 1].clone(),
        b[n].clone(),
        b[n - 1].clone(),
    )
}

/// A periodic continued fraction [b_1..b_N, overline(a_1..a_k)] with
/// partial quotients in Z[1/p].
///
/// Entries may be zero; no collapsing rewrite is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pcf {
    p: u64,
    preperiod: Vec<Rational>,
    period: Vec<Rational>,
}

impl Pcf {
    pub fn new(p: u64, preperiod: Vec<Rational>, period: Vec<Rational>) -> Result<Self> {
        check_odd_prime(p)?;
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        for entry in preperiod.iter().chain(period.iter()) {
            if !in_z_one_over_p_unchecked(entry, p) {
                return Err(Error::NotInRing {
                    value: entry.clone(),
                    p,
                });
            }
        }
        Ok(Pcf {
            p,
            preperiod,
            period,
        })
    }

    /// Purely periodic continued fraction (empty preperiod).
    pub fn purely_periodic(p: u64, period: Vec<Rational>) -> Result<Self> {
        Pcf::new(p, Vec::new(), period)
    }

    /// Convenience constructor from "num/den" strings.
    pub fn parse(p: u64, preperiod: &[&str], period: &[&str]) -> Result<Self> {
        let parse_all = |items: &[&str]| -> Result<Vec<Rational>> {
            items.iter().map(|s| parse_rational(s)).collect()
        };
        Pcf::new(p, parse_all(preperiod)?, parse_all(period)?)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn preperiod(&self) -> &[Rational] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Rational] {
        &self.period
    }

    pub fn preperiod_len(&self) -> usize {
        self.preperiod.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// The n-th partial quotient (1-based), reading the preperiod then
    /// cycling through the period.
    pub fn quotient_at(&self, n: usize) -> &Rational {
        debug_assert!(n >= 1);
        let n0 = n - 1;
        if n0 < self.preperiod.len() {
            &self.preperiod[n0]
        } else {
            &self.period[(n0 - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The cyclic shift a_j..a_{j+k-1} of the period (1-based j in 1..=k).
    pub fn period_shift(&self, j: usize) -> Vec<Rational> {
        let k = self.period.len();
        debug_assert!((1..=k).contains(&j));
        (0..k)
            .map(|i| self.period[(j - 1 + i) % k].clone())
            .collect()
    }
}

impl std::fmt::Display for Pcf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |xs: &[Rational]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "[{}; ({})]_{}",
            join(&self.preperiod),
            join(&self.period),
            self.p
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PcfRepr {
    p: String,
    preperiod: Vec<String>,
    period: Vec<String>,
}

impl Serialize for Pcf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PcfRepr {
            p: self.p.to_string(),
            preperiod: self.preperiod.iter().map(|x| x.to_string()).collect(),
            period: self.period.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pcf {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = PcfRepr::deserialize(deserializer)?;
        let p: u64 = repr.p.parse().map_err(D::Error::custom)?;
        let parse_all = |items: &[String]| -> std::result::Result<Vec<Rational>, D::Error> {
            items
                .iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        };
        Pcf::new(p, parse_all(&repr.preperiod)?, parse_all(&repr.period)?)
            .map_err(D::Error::custom)
    }
}

/// The n-th convergent [A_n : B_n] of the unrolled sequence (n >= 1).
pub fn convergent_at(pcf: &Pcf, n: usize) -> ProjPoint {
    debug_assert!(n >= 1);
    let mut a_prev = Rational::one();
    let mut b_prev = Rational::zero();
    let mut a = pcf.quotient_at(1).clone();
    let mut b = Rational::one();
    for i in 2..=n {
        let c = pcf.quotient_at(i);
        let a_next = &a * c + &a_prev;
        let b_next = &b * c + &b_prev;
        a_prev = a;
        b_prev = b;
        a = a_next;
        b = b_next;
    }
    ProjPoint::new(a, b).expect("continuants are never both zero")
}

/// E = M(b_1..b_N) M(a_1..a_k) M(b_1..b_N)^{-1}; the conjugating factor is
/// the identity for purely periodic inputs. Its trace is A_k + B_{k-1} of
/// the period, independently of the preperiod.
pub fn e_matrix(pcf: &Pcf) -> Mat2 {
    let period_matrix = cf_matrix_allow_empty(pcf.period());
    if pcf.preperiod().is_empty() {
        return period_matrix;
    }
    let pre = cf_matrix_allow_empty(pcf.preperiod());
    let pre_inv = pre.inverse().expect("CF matrices have determinant +-1");
    pre.mul(&period_matrix).mul(&pre_inv)
}

/// Quad(P) = E21 x^2 + (E22 - E11) x - E12, returned unreduced.
///
/// The zero triple is possible (scalar period matrix); callers that need
/// roots must check [`QuadPoly::is_zero`].
pub fn quad_of(pcf: &Pcf) -> QuadPoly {
    let e = e_matrix(pcf);
    QuadPoly::new(e.e21.clone(), &e.e22 - &e.e11, -e.e12.clone())
}

/// Outcome of a PCF-variety membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Membership {
    /// All three cross-multiplied proportionality equations hold exactly.
    pub equations_hold: bool,
    /// Quad(P) is the zero triple, which never matches a nonzero F.
    pub zero_quad: bool,
    /// Membership in V(F): the equations hold with a nonzero Quad.
    pub member: bool,
}

/// Test whether the PCF lies on V(F): A(E22-E11) = B E21,
/// -A E12 = C E21, -B E12 = C (E22-E11).
pub fn variety_membership(pcf: &Pcf, f: &QuadPoly) -> Result<Membership> {
    f.ensure_nonzero()?;
    let e = e_matrix(pcf);
    let diag = &e.e22 - &e.e11;
    let eq1 = f.a() * &diag - f.b() * &e.e21;
    let eq2 = -(f.a() * &e.e12) - f.c() * &e.e21;
    let eq3 = -(f.b() * &e.e12) - f.c() * &diag;
    let equations_hold = eq1.is_zero() && eq2.is_zero() && eq3.is_zero();
    let zero_quad = e.e21.is_zero() && diag.is_zero() && e.e12.is_zero();
    Ok(Membership {
        equations_hold,
        zero_quad,
        member: equations_hold && !zero_quad,
    })
}

/// The reversal map on purely periodic points: (a_1..a_k) in V(F) iff
/// (a_k..a_1) in V(G) with G = Cx^2 - Bx + A.
pub fn sigma_reverse(point: &[Rational], f: &QuadPoly) -> (Vec<Rational>, QuadPoly) {
    let reversed: Vec<Rational> = point.iter().rev().cloned().collect();
    let g = QuadPoly::new(f.c().clone(), -f.b().clone(), f.a().clone());
    (reversed, g)
}

/// The closed-form Quad(P) rows for the small types used in tests and the
/// CLI cross-check: (N, k) with N + k <= 4 as tabulated.
pub fn closed_form_quad(preperiod: &[Rational], period: &[Rational]) -> Option<QuadPoly> {
    let one = Rational::one();
    let two = &one + &one;
    match (preperiod, period) {
        ([], [a1]) => Some(QuadPoly::new(one.clone(), -a1, -one.clone())),
        ([b1], [a1]) => Some(QuadPoly::new(
            one.clone(),
            a1 - &two * b1,
            b1 * b1 - a1 * b1 - &one,
        )),
        ([b1, b2], [a1]) => Some(QuadPoly::new(
            b2 * a1 - b2 * b2 + &one,
            -&two * a1 * b1 * b2 + &two * b1 * b2 * b2 - a1 - &two * b1 + &two * b2,
            a1 * b1 * b1 * b2 - b1 * b1 * b2 * b2 + a1 * b1 + b1 * b1 - &two * b2 * b1 - &one,
        )),
        ([], [a1, a2]) => Some(QuadPoly::new(a2.clone(), -(a1 * a2), -a1)),
        ([b1], [a1, a2]) => Some(QuadPoly::new(
            a1.clone(),
            a2 * a1 - &two * b1 * a1,
            -(a1 * a2 * b1) + a1 * b1 * b1 - a2,
        )),
        ([], [a1, a2, a3]) => Some(QuadPoly::new(
            a2 * a3 + &one,
            -(a1 * a2 * a3) - a1 + a2 - a3,
            -(a2 * a1) - &one,
        )),
        ([b1], [a1, a2, a3]) => Some(QuadPoly::new(
            a1 * a2 + &one,
            a1 * a2 * a3 - &two * a1 * a2 * b1 + a1 - a2 + a3 - &two * b1,
            -(a1 * a2 * a3 * b1) + a1 * a2 * b1 * b1 - a1 * b1 - a2 * a3 + a2 * b1 - a3 * b1
                + b1 * b1
                - &one,
        )),
        _ => None,
    }
}
