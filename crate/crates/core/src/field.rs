//! Exact scalars over the rationals or a prime field.
//!
//! Every number in the crate is a [`Scalar`]; there is no floating point
//! anywhere. Rational arithmetic uses arbitrary-precision integers because
//! bar differentials make coefficients grow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field: the rationals or a prime field of characteristic `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarField {
    Q,
    Fp(u64),
}

impl ScalarField {
    /// Parses the CLI/JSON field selector `"q"` or `"fp:<p>"`.
    pub fn parse(s: &str) -> Result<ScalarField> {
        if s == "q" {
            return Ok(ScalarField::Q);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad characteristic in {s:?}")))?;
            return ScalarField::prime(p);
        }
        Err(Error::InvalidInput(format!(
            "unknown field {s:?}, expected \"q\" or \"fp:<p>\""
        )))
    }

    pub fn prime(p: u64) -> Result<ScalarField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ScalarField::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarField::Q => Scalar::Q(BigRational::zero()),
            ScalarField::Fp(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            ScalarField::Q => Scalar::Q(BigRational::one()),
            ScalarField::Fp(p) => Scalar::Fp { p: *p, v: 1 % *p },
        }
    }

    /// The image of the integer `n` in this field.
    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            ScalarField::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            ScalarField::Fp(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { p: *p, v: m }
            }
        }
    }

    /// Parses a scalar literal: `num/den` or an integer.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        match self {
            ScalarField::Q => {
                let r = BigRational::from_str(s)
                    .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
                Ok(Scalar::Q(r))
            }
            ScalarField::Fp(p) => {
                let n = i64::from_str(s).map_err(|_| {
                    Error::InvalidInput(format!("bad prime-field element {s:?}"))
                })?;
                Ok(Scalar::Fp {
                    p: *p,
                    v: n.rem_euclid(*p as i64) as u64,
                })
            }
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Q => write!(f, "q"),
            ScalarField::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Arithmetic between scalars of different fields is
/// a programming error and panics; public entry points validate fields before
/// arithmetic starts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Q(_) => ScalarField::Q,
            Scalar::Fp { p, .. } => ScalarField::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) if p == q => Scalar::Fp {
                p: *p,
                v: (a + b) % p,
            },
            _ => panic!("scalar field mismatch in add"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) if p == q => Scalar::Fp {
                p: *p,
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => panic!("scalar field mismatch in mul"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "inverse of zero");
                Scalar::Fp {
                    p: *p,
                    v: mod_pow(*v, p - 2, *p),
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Integer power, allowing negative exponents on invertible scalars.
    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Canonical text form: `num/den` over the rationals (plain integer when
    /// the denominator is 1), the least nonnegative residue over a prime field.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else if r.denom().is_negative() {
                    let n = -r.numer();
                    let d = -r.denom();
                    format!("{n}/{d}")
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_selectors() {
        assert_eq!(ScalarField::parse("q").unwrap(), ScalarField::Q);
        assert_eq!(ScalarField::parse("fp:7").unwrap(), ScalarField::Fp(7));
        assert!(ScalarField::parse("fp:6").is_err());
        assert!(ScalarField::parse("r").is_err());
    }

    #[test]
    fn rational_roundtrip() {
        let f = ScalarField::Q;
        let x = f.parse_scalar("3/4").unwrap();
        assert_eq!(x.to_text(), "3/4");
        let y = f.parse_scalar("-2").unwrap();
        assert_eq!(x.mul(&y).to_text(), "-3/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = ScalarField::Fp(7);
        let x = f.from_int(3);
        let y = f.from_int(5);
        assert_eq!(x.mul(&y).to_text(), "1");
        assert_eq!(x.inv().to_text(), "5");
        assert_eq!(f.from_int(-1).to_text(), "6");
        assert_eq!(x.pow(-2).to_text(), "4");
    }
}
