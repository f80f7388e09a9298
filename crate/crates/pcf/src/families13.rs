//! Families of type-(1,3) expansions [b1, overline(a1, a2, a3)] for square
//! roots of d = a^2 + 1, obtained by slicing the variety at b1 = a.
//!
//! On that slice the defining system collapses: either a2 = 0 and
//! a3 = 2a - a1, or a2 = 2(a - a1)/(a1^2 - 2a a1 - 1) and a3 = a1. The
//! constructions never assume convergence from the sufficient or necessary
//! conditions quoted alongside them; the criterion is always run and both
//! verdicts are reported.

use num_traits::Zero;

use crate::cf::{variety_membership, Membership, Pcf};
use crate::convergence::{check_convergence, ConvergenceReport};
use crate::error::{Error, Result};
use crate::exact::{
    check_odd_prime, in_z_one_over_p_unchecked, padic_valuation_unchecked, rat_int, Rational,
};
use crate::quad::QuadPoly;

/// A constructed family member together with its verification data.
#[derive(Debug, Clone)]
pub struct Family13Result {
    pub pcf: Pcf,
    /// The radicand: the limit squares to d when the expansion converges.
    pub d: Rational,
    pub membership: Membership,
    pub convergence: ConvergenceReport,
    /// The quoted sufficient condition v_p(a), v_p(a1) < 0 (zero family).
    pub sufficient_condition: Option<bool>,
    /// The quoted necessary condition
    /// v_p((2a a1^2 + 4a1 - 2a)/(-a1^2 + 2a a1 + 1)) < 0 (general family).
    pub necessary_condition: Option<bool>,
}

impl serde::Serialize for Family13Result {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Family13Result", 6)?;
        s.serialize_field("pcf", &self.pcf)?;
        s.serialize_field("d", &self.d.to_string())?;
        s.serialize_field("membership", &self.membership)?;
        s.serialize_field("convergence", &self.convergence)?;
        s.serialize_field("sufficientCondition", &self.sufficient_condition)?;
        s.serialize_field("necessaryCondition", &self.necessary_condition)?;
        s.end()
    }
}

fn base_result(
    pcf: Pcf,
    d: Rational,
    sufficient_condition: Option<bool>,
    necessary_condition: Option<bool>,
) -> Result<Family13Result> {
    let f = QuadPoly::x_squared_minus(&d);
    let membership = variety_membership(&pcf, &f)?;
    if !membership.member {
        return Err(Error::Internal(format!(
            "family point {pcf} is off V(x^2 - {d})"
        )));
    }
    let convergence = check_convergence(&pcf);
    Ok(Family13Result {
        pcf,
        d,
        membership,
        convergence,
        sufficient_condition,
        necessary_condition,
    })
}

fn require_in_ring(x: &Rational, p: u64) -> Result<()> {
    if in_z_one_over_p_unchecked(x, p) {
        Ok(())
    } else {
        Err(Error::NotInRing {
            value: x.clone(),
            p,
        })
    }
}

/// The a2 = 0 member [a, overline(a1, 0, 2a - a1)] on V(x^2 - (a^2 + 1)).
pub fn family_1_3_zero(a: &Rational, a1: &Rational, p: u64) -> Result<Family13Result> {
    check_odd_prime(p)?;
    require_in_ring(a, p)?;
    require_in_ring(a1, p)?;
    let d = a * a + Rational::from_integer(1.into());
    let pcf = Pcf::new(
        p,
        vec![a.clone()],
        vec![a1.clone(), Rational::zero(), rat_int(2) * a - a1],
    )?;
    let sufficient = padic_valuation_unchecked(a, p).is_negative()
        && padic_valuation_unchecked(a1, p).is_negative();
    base_result(pcf, d, Some(sufficient), None)
}

/// The a2 != 0 member [a, overline(a1, 2(a - a1)/(a1^2 - 2a a1 - 1), a1)]
/// on V(x^2 - (a^2 + 1)).
pub fn family_1_3_general(a: &Rational, a1: &Rational, p: u64) -> Result<Family13Result> {
    check_odd_prime(p)?;
    require_in_ring(a, p)?;
    require_in_ring(a1, p)?;
    let denominator = a1 * a1 - rat_int(2) * a * a1 - Rational::from_integer(1.into());
    if denominator.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let a2 = rat_int(2) * (a - a1) / &denominator;
    require_in_ring(&a2, p)?;
    let d = a * a + Rational::from_integer(1.into());
    let pcf = Pcf::new(p, vec![a.clone()], vec![a1.clone(), a2, a1.clone()])?;
    // v_p of the trace quantity (2a a1^2 + 4 a1 - 2a)/(-a1^2 + 2a a1 + 1)
    let necessary_value =
        (rat_int(2) * a * a1 * a1 + rat_int(4) * a1 - rat_int(2) * a) / -&denominator;
    let necessary = padic_valuation_unchecked(&necessary_value, p).is_negative();
    base_result(pcf, d, None, Some(necessary))
}

/// The a1 = 2 specialization at a = (P + 3)/4, where P = p^k when p = 1
/// (mod 4) and P = p^{2k} otherwise: the expansion
/// [(P+3)/4, overline(2, -(P-5)/(2P), 2)] of sqrt((P^2 + 6P + 25)/16).
pub fn family_1_3_prime(p: u64, k: u32) -> Result<Family13Result> {
    check_odd_prime(p)?;
    if k == 0 {
        return Err(Error::Invalid("k must be >= 1".into()));
    }
    let exponent = if p % 4 == 1 { k } else { 2 * k };
    let big_p = Rational::from_integer(num_bigint::BigInt::from(p).pow(exponent));
    let a = (&big_p + rat_int(3)) / rat_int(4);
    family_1_3_general(&a, &rat_int(2), p)
}

/// The relation obtained by eliminating a2 from the (1,3) system:
/// A a1^2 b1^2 + B a1^2 b1 + 2A a1 b1 + A a3^2 - 2A a3 b1 + A b1^2
/// + C a1^2 + B a1 - B a3 + B b1 + A + C = 0.
pub fn elimination_1_3_holds(
    f: &QuadPoly,
    b1: &Rational,
    a1: &Rational,
    a3: &Rational,
) -> bool {
    let (a, b, c) = (f.a(), f.b(), f.c());
    let total = a * a1 * a1 * b1 * b1
        + b * a1 * a1 * b1
        + rat_int(2) * a * a1 * b1
        + a * a3 * a3
        - rat_int(2) * a * a3 * b1
        + a * b1 * b1
        + c * a1 * a1
        + b * a1
        - b * a3
        + b * b1
        + a
        + c;
    total.is_zero()
}
