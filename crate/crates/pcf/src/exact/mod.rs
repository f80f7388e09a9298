//! Exact scalar arithmetic: arbitrary-precision rationals, p-adic
//! valuations, membership in Z[1/p], and truncated p-adic numbers.
//!
//! The universal scalar is [`Rational`], a reduced fraction with positive
//! denominator (0 is 0/1). The p-adic valuation v_p extends to rationals by
//! v_p(a/b) = v_p(a) - v_p(b) and is +infinity on 0; the induced absolute
//! value is |x|_p = p^(-v_p(x)).

pub mod padic;
pub mod primes;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::Ratio<BigInt>;

pub use padic::{PAdicApprox, PadicRoot, QuadRootsOutcome};

/// A p-adic valuation: either a finite integer or +infinity (the valuation
/// of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    /// The finite value, panicking on +infinity.
    pub fn finite(self) -> i64 {
        match self {
            Valuation::Finite(v) => v,
            Valuation::Infinite => panic!("valuation of zero is infinite"),
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Valuation::Finite(v) if v < 0)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if primes::is_odd_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Multiplicity of p in a nonzero big integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            n = q;
            v += 1;
        } else {
            return v;
        }
    }
}

/// The p-adic valuation of a rational; +infinity for 0.
pub fn padic_valuation(x: &Rational, p: u64) -> Result<Valuation> {
    check_odd_prime(p)?;
    Ok(padic_valuation_unchecked(x, p))
}

pub(crate) fn padic_valuation_unchecked(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let vn = int_valuation(x.numer(), p) as i64;
    let vd = int_valuation(x.denom(), p) as i64;
    Valuation::Finite(vn - vd)
}

/// Membership in Z[1/p]: true iff every prime factor of the denominator is p.
pub fn in_z_one_over_p(x: &Rational, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    Ok(in_z_one_over_p_unchecked(x, p))
}

pub(crate) fn in_z_one_over_p_unchecked(x: &Rational, p: u64) -> bool {
    let p = BigInt::from(p);
    let mut d = x.denom().clone();
    while d.is_multiple_of(&p) {
        d /= &p;
    }
    d.is_one()
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

pub fn is_rational_square(x: &Rational) -> bool {
    rational_sqrt(x).is_some()
}

/// Parse a rational from "num", "num/den", with optional sign and
/// surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse rational from {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = n.parse().map_err(|_| bad())?;
    let denom: BigInt = match d {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Shorthand for the rational n/d (d nonzero).
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn big_pow(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

/// A point of the projective line over Q, stored as a coordinate pair.
///
/// Equality is equality up to a common nonzero rational scale; [1:0] is the
/// point at infinity.
#[derive(Debug, Clone)]
pub struct ProjPoint {
    x: Rational,
    y: Rational,
}

impl ProjPoint {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::Invalid("[0:0] is not a projective point".into()));
        }
        Ok(ProjPoint { x, y })
    }

    pub fn infinity() -> Self {
        ProjPoint {
            x: Rational::one(),
            y: Rational::zero(),
        }
    }

    pub fn from_value(v: Rational) -> Self {
        ProjPoint {
            x: v,
            y: Rational::one(),
        }
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// The affine value x/y, or None for the point at infinity.
    pub fn value(&self) -> Option<Rational> {
        if self.is_infinity() {
            None
        } else {
            Some(&self.x / &self.y)
        }
    }

    /// Valuation of the chordal distance between two points:
    /// v_p(x y' - x' y) - min(v_p(x), v_p(y)) - min(v_p(x'), v_p(y')).
    /// Returns Infinite for equal points.
    pub fn chordal_distance_valuation(&self, other: &ProjPoint, p: u64) -> Result<Valuation> {
        check_odd_prime(p)?;
        let cross = &self.x * &other.y - &other.x * &self.y;
        if cross.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let min_vp = |pt: &ProjPoint| -> i64 {
            let vx = padic_valuation_unchecked(&pt.x, p);
            let vy = padic_valuation_unchecked(&pt.y, p);
            vx.min(vy).finite()
        };
        let vc = padic_valuation_unchecked(&cross, p).finite();
        Ok(Valuation::Finite(vc - min_vp(self) - min_vp(other)))
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        (&self.x * &other.y - &other.x * &self.y).is_zero()
    }
}

impl Eq for ProjPoint {}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.x, self.y)
    }
}
