//! Arbitrary-precision rationals and their canonical `num/den` encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`, reduced. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Canonical text form: always `num/den`, zero is `0/1`.
pub fn encode(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn decode(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `#[serde(with = "as_string")]` for rationals stored as `num/den`.
pub mod as_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{decode, encode, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&encode(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        decode(&s).map_err(D::Error::custom)
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Signed integer power; errors on `0^(-k)`.
pub fn powi(base: &Rational, exp: i64) -> Result<Rational> {
    if exp >= 0 {
        Ok(pow(base, exp as u32))
    } else if base.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(pow(&base.recip(), exp.unsigned_abs() as u32))
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_round_trip() {
        for s in ["0/1", "-3/7", "1707797/1", "12/5"] {
            assert_eq!(encode(&decode(s).unwrap()), s);
        }
        assert_eq!(encode(&rat(0)), "0/1");
        assert_eq!(encode(&ratio(6, -4)), "-3/2");
        assert_eq!(decode("42").unwrap(), rat(42));
        assert!(decode("1/0").is_err());
        assert!(decode("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(10), BigInt::from(3628800));
    }

    #[test]
    fn signed_powers() {
        assert_eq!(powi(&rat(2), -3).unwrap(), ratio(1, 8));
        assert!(powi(&rat(0), -1).is_err());
    }
}
