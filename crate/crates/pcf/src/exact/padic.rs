//! Truncated p-adic numbers with explicit precision bookkeeping.
//!
//! A [`PAdicApprox`] represents the nonzero value `p^valuation * unit` with
//! `unit` known modulo `p^precision` (so the value itself is known modulo
//! `p^(valuation + precision)`). Arithmetic tracks worst-case precision
//! loss: multiplicative operations preserve relative precision, addition
//! can cancel leading digits and reports [`Error::PrecisionExhausted`] when
//! every known digit cancels.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_odd_prime, int_valuation, primes, Rational};
use crate::error::{Error, Result};
use crate::quad::QuadPoly;

#[derive(Debug, Clone)]
pub struct PAdicApprox {
    p: u64,
    valuation: i64,
    unit: BigUint,
    precision: u32,
}

impl PAdicApprox {
    /// Embed a nonzero rational with `precision` known unit digits.
    pub fn from_rational(x: &Rational, p: u64, precision: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        if precision == 0 {
            return Err(Error::Invalid("precision must be >= 1".into()));
        }
        let big_p = BigInt::from(p);
        let vn = int_valuation(x.numer(), p);
        let vd = int_valuation(x.denom(), p);
        let n_unit = x.numer() / big_p.pow(vn as u32);
        let d_unit = x.denom() / big_p.pow(vd as u32);
        let modulus = super::big_pow(p, precision);
        let n_res = n_unit.mod_floor(&BigInt::from(modulus.clone()));
        let unit = n_res.to_biguint().unwrap() * inv_mod(&d_unit.to_biguint().unwrap(), &modulus)
            % &modulus;
        Ok(PAdicApprox {
            p,
            valuation: vn as i64 - vd as i64,
            unit,
            precision,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn unit_digits(&self) -> &BigUint {
        &self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Exponent of the modulus the value is known by: valuation + precision.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    fn modulus(&self) -> BigUint {
        super::big_pow(self.p, self.precision)
    }

    pub fn truncate(&self, precision: u32) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        PAdicApprox {
            p: self.p,
            valuation: self.valuation,
            unit: &self.unit % super::big_pow(self.p, precision),
            precision,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PAdicApprox {
            p: self.p,
            valuation: self.valuation,
            unit: &m - &self.unit,
            precision: self.precision,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let precision = self.precision.min(other.precision);
        let m = super::big_pow(self.p, precision);
        PAdicApprox {
            p: self.p,
            valuation: self.valuation + other.valuation,
            unit: &self.unit * &other.unit % m,
            precision,
        }
    }

    pub fn inv(&self) -> Self {
        let m = self.modulus();
        PAdicApprox {
            p: self.p,
            valuation: -self.valuation,
            unit: inv_mod(&self.unit, &m),
            precision: self.precision,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiply by a nonzero exact rational; relative precision is kept.
    pub fn mul_rational(&self, q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroInput);
        }
        let factor = PAdicApprox::from_rational(q, self.p, self.precision)?;
        Ok(self.mul(&factor))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.p, other.p);
        let abs = self.absolute_precision().min(other.absolute_precision());
        let val = self.valuation.min(other.valuation);
        if abs <= val {
            return Err(Error::PrecisionExhausted);
        }
        let digits = (abs - val) as u32;
        let m = super::big_pow(self.p, digits);
        let lift = |x: &PAdicApprox| -> BigUint {
            let shift = (x.valuation - val) as u32;
            &x.unit * super::big_pow(x.p, shift) % &m
        };
        let sum = (lift(self) + lift(other)) % &m;
        if sum.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        let cancel = int_valuation(&BigInt::from(sum.clone()), self.p) as u32;
        if cancel >= digits {
            return Err(Error::PrecisionExhausted);
        }
        let unit = sum / super::big_pow(self.p, cancel);
        Ok(PAdicApprox {
            p: self.p,
            valuation: val + cancel as i64,
            unit,
            precision: digits - cancel,
        })
    }

    /// Add an exact rational (which carries unlimited precision).
    pub fn add_rational(&self, q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Ok(self.clone());
        }
        let vq = super::padic_valuation_unchecked(q, self.p).finite();
        let rel = self.absolute_precision() - vq;
        if rel <= 0 {
            // the exact term is invisible at the current precision
            return Ok(self.clone());
        }
        let other = PAdicApprox::from_rational(q, self.p, rel as u32)?;
        self.add(&other)
    }

    /// True iff self - other has valuation >= `abs_exponent`. Both operands
    /// must be known at least to that exponent.
    pub fn congruent_mod(&self, other: &Self, abs_exponent: i64) -> bool {
        debug_assert!(self.absolute_precision() >= abs_exponent);
        debug_assert!(other.absolute_precision() >= abs_exponent);
        let val = self.valuation.min(other.valuation);
        if val >= abs_exponent {
            return true;
        }
        let digits = (abs_exponent - val) as u32;
        let m = super::big_pow(self.p, digits);
        let lift = |x: &PAdicApprox| -> BigUint {
            if x.valuation >= abs_exponent {
                return BigUint::zero();
            }
            let shift = (x.valuation - val) as u32;
            &x.unit * super::big_pow(x.p, shift) % &m
        };
        lift(self) == lift(other)
    }

    pub fn congruent_to_rational(&self, q: &Rational, abs_exponent: i64) -> bool {
        if q.is_zero() {
            return self.valuation >= abs_exponent;
        }
        let vq = super::padic_valuation_unchecked(q, self.p).finite();
        if vq >= abs_exponent {
            return self.valuation >= abs_exponent;
        }
        let rel = (abs_exponent - vq) as u32;
        let other = PAdicApprox::from_rational(q, self.p, rel)
            .expect("nonzero rational embeds at positive precision");
        self.congruent_mod(&other, abs_exponent)
    }
}

/// Two approximations compare equal iff the primes and valuations match and
/// the unit digits agree modulo p^min(precisions).
impl PartialEq for PAdicApprox {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p || self.valuation != other.valuation {
            return false;
        }
        let m = super::big_pow(self.p, self.precision.min(other.precision));
        &self.unit % &m == &other.unit % &m
    }
}

impl Eq for PAdicApprox {}

impl std::fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}*{}^{} + O({}^{})",
            self.unit,
            self.p,
            self.valuation,
            self.p,
            self.absolute_precision()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PAdicApproxRepr {
    p: String,
    valuation: i64,
    #[serde(rename = "unitDigits")]
    unit_digits: String,
    precision: u32,
}

impl Serialize for PAdicApprox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PAdicApproxRepr {
            p: self.p.to_string(),
            valuation: self.valuation,
            unit_digits: self.unit.to_string(),
            precision: self.precision,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PAdicApprox {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = PAdicApproxRepr::deserialize(deserializer)?;
        let p: u64 = repr.p.parse().map_err(D::Error::custom)?;
        let unit: BigUint = repr.unit_digits.parse().map_err(D::Error::custom)?;
        if repr.precision == 0 || unit.is_zero() {
            return Err(D::Error::custom("invalid p-adic approximation"));
        }
        Ok(PAdicApprox {
            p,
            valuation: repr.valuation,
            unit,
            precision: repr.precision,
        })
    }
}

fn inv_mod(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    debug_assert!(ext.gcd.is_one(), "inverse of non-unit");
    ext.x.mod_floor(&m).to_biguint().unwrap()
}

/// Square root modulo an odd prime (Tonelli-Shanks), or None for a
/// non-residue. `a` is reduced modulo p.
fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let legendre = primes::pow_mod(a, (p - 1) / 2, p);
    if legendre != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(primes::pow_mod(a, (p + 1) / 4, p));
    }
    // p = 1 mod 4: write p - 1 = q * 2^s and walk the 2-Sylow tower.
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while primes::pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = primes::pow_mod(z, q, p);
    let mut t = primes::pow_mod(a, q, p);
    let mut r = primes::pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = ((t2 as u128 * t2 as u128) % p as u128) as u64;
            i += 1;
        }
        let b = primes::pow_mod(c, 1 << (m - i - 1), p);
        let b2 = ((b as u128 * b as u128) % p as u128) as u64;
        m = i;
        c = b2;
        t = ((t as u128 * b2 as u128) % p as u128) as u64;
        r = ((r as u128 * b as u128) % p as u128) as u64;
    }
    Some(r)
}

/// Lift a square root of `unit` from mod p to mod p^precision by quadratic
/// Newton refinement: r <- (r + unit/r) / 2.
fn hensel_sqrt(unit: &BigUint, root_mod_p: u64, p: u64, precision: u32) -> BigUint {
    let mut r = BigUint::from(root_mod_p);
    let mut known = 1u32;
    while known < precision {
        known = (known * 2).min(precision);
        let m = super::big_pow(p, known);
        let inv_r = inv_mod(&(&r % &m), &m);
        let inv_2 = inv_mod(&BigUint::from(2u32), &m);
        r = (&r + (unit % &m) * inv_r) % &m * inv_2 % &m;
    }
    r
}

/// The canonical p-adic square root of a nonzero rational to `precision`
/// unit digits, or None when x is not a square in Q_p.
///
/// A square root exists iff v_p(x) is even and the unit part of x is a
/// quadratic residue mod p; of the two roots the one whose unit digit mod p
/// lies in [1, (p-1)/2] is returned, so results are deterministic.
pub fn padic_sqrt(x: &Rational, p: u64, precision: u32) -> Result<Option<PAdicApprox>> {
    check_odd_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if precision == 0 {
        return Err(Error::Invalid("precision must be >= 1".into()));
    }
    let embedded = PAdicApprox::from_rational(x, p, precision)?;
    if embedded.valuation % 2 != 0 {
        return Ok(None);
    }
    let unit_mod_p = (&embedded.unit % BigUint::from(p)).to_u64().unwrap();
    let root_mod_p = match sqrt_mod_p(unit_mod_p, p) {
        Some(r) => r,
        None => return Ok(None),
    };
    let root = hensel_sqrt(&embedded.unit, root_mod_p, p, precision);
    let candidate = PAdicApprox {
        p,
        valuation: embedded.valuation / 2,
        unit: root,
        precision,
    };
    let first_digit = (&candidate.unit % BigUint::from(p)).to_u64().unwrap();
    Ok(Some(if first_digit <= (p - 1) / 2 {
        candidate
    } else {
        candidate.neg()
    }))
}

/// A root of a quadratic polynomial inside the projective line over Q_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicRoot {
    Rational(Rational),
    Infinity,
    Approx(PAdicApprox),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadRootsOutcome {
    /// Both roots, with multiplicity.
    Roots(Vec<PadicRoot>),
    /// The discriminant is not a square in Q_p.
    NotInQp,
}

/// Roots of F in P^1(Q_p) with multiplicity. Degenerate degrees follow the
/// convention that infinity is a root of Bx + C and a double root of a
/// nonzero constant.
pub fn padic_quad_roots(f: &QuadPoly, p: u64, precision: u32) -> Result<QuadRootsOutcome> {
    check_odd_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (a, b, c) = (f.a(), f.b(), f.c());
    if a.is_zero() {
        if b.is_zero() {
            return Ok(QuadRootsOutcome::Roots(vec![
                PadicRoot::Infinity,
                PadicRoot::Infinity,
            ]));
        }
        return Ok(QuadRootsOutcome::Roots(vec![
            PadicRoot::Rational(-(c / b)),
            PadicRoot::Infinity,
        ]));
    }
    let two_a = Rational::from_integer(BigInt::from(2)) * a;
    let disc = f.discriminant();
    if disc.is_zero() {
        let root = PadicRoot::Rational(-(b / &two_a));
        return Ok(QuadRootsOutcome::Roots(vec![root.clone(), root]));
    }
    if let Some(r) = super::rational_sqrt(&disc) {
        return Ok(QuadRootsOutcome::Roots(vec![
            PadicRoot::Rational((&r - b) / &two_a),
            PadicRoot::Rational((-&r - b) / &two_a),
        ]));
    }
    // Irrational case: roots (-B +- sqrt(disc)) / 2A, assembled with
    // precision-tracked arithmetic. Cancellation in the addition triggers a
    // single retry with four times the digits.
    for working in [precision, 4 * precision] {
        let sqrt_disc = match padic_sqrt(&disc, p, working)? {
            Some(r) => r,
            None => return Ok(QuadRootsOutcome::NotInQp),
        };
        let assemble = |s: &PAdicApprox| -> Result<PAdicApprox> {
            let num = s.add_rational(&-b.clone())?;
            num.mul_rational(&(Rational::one() / &two_a))
        };
        match (assemble(&sqrt_disc), assemble(&sqrt_disc.neg())) {
            (Ok(r1), Ok(r2)) => {
                return Ok(QuadRootsOutcome::Roots(vec![
                    PadicRoot::Approx(r1.truncate(precision)),
                    PadicRoot::Approx(r2.truncate(precision)),
                ]));
            }
            _ => continue,
        }
    }
    Err(Error::PrecisionExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    /// Brute-force square roots of `x` modulo p^k over all residues.
    fn sqrt_oracle(x: u64, p: u64, k: u32) -> Vec<u64> {
        let m = super::super::big_pow(p, k).to_u64().unwrap();
        (0..m).filter(|r| (r * r) % m == x % m).collect()
    }

    #[test]
    fn sqrt_of_10_mod_9() {
        // 10 = 1 mod 9; oracle roots mod 9 are {1, 8}; canonical unit digit
        // mod 3 lies in [1, 1], picking 1.
        let oracle = sqrt_oracle(10, 3, 2);
        assert_eq!(oracle, vec![1, 8]);
        let r = padic_sqrt(&rat_int(10), 3, 2).unwrap().unwrap();
        assert_eq!(r.valuation(), 0);
        assert_eq!(r.unit_digits(), &BigUint::from(1u32));
    }

    #[test]
    fn nonresidue_has_no_root() {
        // 5 = 2 mod 3 and squaring every residue mod 3 misses 2.
        assert!(sqrt_oracle(5, 3, 1).is_empty());
        assert_eq!(padic_sqrt(&rat_int(5), 3, 4).unwrap(), None);
    }

    #[test]
    fn exact_square_with_negative_valuation() {
        let r = padic_sqrt(&rat(1, 9), 3, 3).unwrap().unwrap();
        assert_eq!(r.valuation(), -1);
        assert_eq!(r.unit_digits(), &BigUint::from(1u32));
    }

    #[test]
    fn sqrt_squares_back() {
        for x in [7i64, 10, 13, 22, 46] {
            let q = rat_int(x);
            if let Some(r) = padic_sqrt(&q, 3, 6).unwrap() {
                assert!(r.square().congruent_to_rational(&q, 6));
            }
        }
        // odd valuation is never a square
        assert_eq!(padic_sqrt(&rat_int(3), 3, 4).unwrap(), None);
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(
            padic_sqrt(&Rational::zero(), 3, 2),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn quad_roots_of_example_polynomial() {
        // x^2 - 12x + 8 has discriminant 112 = 16*7 and 7 is a residue mod 3,
        // so the roots are 6 +- 2 sqrt(7) in Q_3.
        let f = QuadPoly::new(rat_int(1), rat_int(-12), rat_int(8));
        match padic_quad_roots(&f, 3, 4).unwrap() {
            QuadRootsOutcome::Roots(roots) => {
                assert_eq!(roots.len(), 2);
                for root in roots {
                    match root {
                        PadicRoot::Approx(r) => {
                            let fr = r.square().add_rational(&(rat_int(-12))).unwrap();
                            // check F(r) = r^2 - 12r + 8 = 0 mod 3^4
                            let v = r
                                .square()
                                .add(&r.mul_rational(&rat_int(-12)).unwrap())
                                .unwrap();
                            assert!(v.congruent_to_rational(&rat_int(-8), 4));
                            let _ = fr;
                        }
                        other => panic!("expected approximate root, got {other:?}"),
                    }
                }
            }
            QuadRootsOutcome::NotInQp => panic!("discriminant is a 3-adic square"),
        }
    }

    #[test]
    fn degenerate_degree_keeps_infinity() {
        let f = QuadPoly::new(rat_int(0), rat_int(2), rat_int(-4));
        let roots = match padic_quad_roots(&f, 5, 3).unwrap() {
            QuadRootsOutcome::Roots(r) => r,
            _ => panic!(),
        };
        assert_eq!(roots[0], PadicRoot::Rational(rat_int(2)));
        assert_eq!(roots[1], PadicRoot::Infinity);
    }

    #[test]
    fn non_square_discriminant_not_in_qp() {
        let f = QuadPoly::new(rat_int(1), rat_int(0), rat_int(-5));
        assert_eq!(
            padic_quad_roots(&f, 3, 3).unwrap(),
            QuadRootsOutcome::NotInQp
        );
    }

    #[test]
    fn equality_ignores_extra_digits() {
        let a = PAdicApprox::from_rational(&rat_int(10), 3, 5).unwrap();
        let b = PAdicApprox::from_rational(&rat_int(10 + 27), 3, 3).unwrap();
        assert_eq!(a, b);
        let c = PAdicApprox::from_rational(&rat_int(10 + 9), 3, 3).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn addition_tracks_cancellation() {
        let a = PAdicApprox::from_rational(&rat_int(1), 3, 4).unwrap();
        let b = PAdicApprox::from_rational(&rat_int(8), 3, 4).unwrap();
        // 1 + 8 = 9: two digits cancel
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), 2);
        assert_eq!(s.precision(), 2);
        // complete cancellation is a precision failure, not a zero
        let exact = a.add(&a.neg());
        assert_eq!(exact, Err(Error::PrecisionExhausted));
    }

    #[test]
    fn serde_shape() {
        let r = padic_sqrt(&rat_int(10), 3, 4).unwrap().unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"unitDigits\""));
        let back: PAdicApprox = serde_json::from_str(&json).unwrap();
        assert_eq!(r, back);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
