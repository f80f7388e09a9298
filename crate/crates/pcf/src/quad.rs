//! Quadratic polynomials F(x) = Ax^2 + Bx + C as projective coefficient
//! triples: (A, B, C) and (λA, λB, λC) cut out the same root multiset, and
//! the discriminant Δ = B^2 - 4AC transforms by λ^2.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};

/// Coefficient triple of a quadratic. The all-zero triple is representable
/// (it shows up as the Quad of scalar-matrix periods) but every root-taking
/// operation rejects it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPoly {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl QuadPoly {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        QuadPoly { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        QuadPoly {
            a: Rational::from_integer(BigInt::from(a)),
            b: Rational::from_integer(BigInt::from(b)),
            c: Rational::from_integer(BigInt::from(c)),
        }
    }

    /// x^2 - d.
    pub fn x_squared_minus(d: &Rational) -> Self {
        QuadPoly::new(Rational::one(), Rational::zero(), -d.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn ensure_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    pub fn discriminant(&self) -> Rational {
        &self.b * &self.b - Rational::from_integer(BigInt::from(4)) * &self.a * &self.c
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        (&self.a * x + &self.b) * x + &self.c
    }

    /// F'(x) = 2Ax + B.
    pub fn derivative_at(&self, x: &Rational) -> Rational {
        Rational::from_integer(BigInt::from(2)) * &self.a * x + &self.b
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        QuadPoly::new(&self.a * lambda, &self.b * lambda, &self.c * lambda)
    }

    /// Projective proportionality via cross-multiplication; the zero triple
    /// is proportional to nothing (including itself).
    pub fn proportional_to(&self, other: &QuadPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let cross_ab = &self.a * &other.b - &other.a * &self.b;
        let cross_ac = &self.a * &other.c - &other.a * &self.c;
        let cross_bc = &self.b * &other.c - &other.b * &self.c;
        cross_ab.is_zero() && cross_ac.is_zero() && cross_bc.is_zero()
    }

    /// The primitive integer triple (content removed, first nonzero
    /// coefficient of the requested sign).
    pub fn primitive_integer(&self, leading_positive: bool) -> (BigInt, BigInt, BigInt) {
        use num_integer::Integer;
        assert!(!self.is_zero());
        let lcm = self
            .a
            .denom()
            .lcm(self.b.denom())
            .lcm(self.c.denom());
        let a = (&self.a * &lcm).to_integer();
        let b = (&self.b * &lcm).to_integer();
        let c = (&self.c * &lcm).to_integer();
        let gcd = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &gcd, b / &gcd, c / &gcd);
        if leading_positive {
            let lead = [&a, &b, &c].into_iter().find(|x| !x.is_zero()).unwrap();
            if lead.is_negative() {
                a = -a;
                b = -b;
                c = -c;
            }
        }
        (a, b, c)
    }
}

impl std::fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})x^2 + ({})x + ({})", self.a, self.b, self.c)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadPolyRepr {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
}

impl Serialize for QuadPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuadPolyRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadPoly {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = QuadPolyRepr::deserialize(deserializer)?;
        let parse = |s: &str| parse_rational(s).map_err(D::Error::custom);
        Ok(QuadPoly::new(
            parse(&repr.a)?,
            parse(&repr.b)?,
            parse(&repr.c)?,
        ))
    }
}
