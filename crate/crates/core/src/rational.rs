//! Exact rational helpers shared by the geometry and relation modules.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    BigRational::from_integer(v.clone())
}

/// Sign as -1, 0 or 1, with sgn(0) = 0.
pub fn sgn(v: &Rational) -> i32 {
    match v.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Parses `p/q` or `p`, with an optional leading sign. Decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let parse_int = |part: &str, allow_sign: bool| -> Result<BigInt> {
        let digits = if allow_sign {
            part.strip_prefix(['+', '-']).unwrap_or(part)
        } else {
            part
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        part.parse::<BigInt>().map_err(|_| err())
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(t, true)?)),
        Some((p, q)) => {
            let num = parse_int(p, true)?;
            let den = parse_int(q, false)?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Lowest-terms `p/q`, or `p` when the denominator is 1.
pub fn format_rational(v: &Rational) -> String {
    v.to_string()
}

/// Largest integer not exceeding `v`.
pub fn floor(v: &Rational) -> BigInt {
    v.floor().to_integer()
}

pub fn abs(v: &Rational) -> Rational {
    v.abs()
}
