//! Exact rational scalars and their JSON / decimal renderings.
//!
//! Every quantity in this crate is an arbitrary-precision rational
//! ([`Rat`]); floating point is never used for geometry. Rationals
//! serialize as `[numerator, denominator]` pairs in lowest terms with a
//! positive denominator, and decimal strings are produced only for
//! display (plots, reports) by exact integer long division with
//! round-half-to-even at the requested digit count.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;

pub type Rat = num_rational::BigRational;

/// Shorthand constructor from machine integers; panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact decimal rendering with a fixed number of fractional digits.
///
/// The output always carries exactly `digits` fractional digits (zero
/// digits means an integer string), uses round-half-to-even, and never
/// prints `-0.000…`.
pub fn decimal_string(q: &Rat, digits: usize) -> String {
    let mut num = q.numer().abs();
    let den = q.denom().clone(); // always positive for BigRational
    let scale = BigInt::from(10u8).pow(digits as u32);
    num *= &scale;
    let (mut quot, rem) = num_integer::Integer::div_rem(&num, &den);
    let twice = &rem * 2;
    if twice > den || (twice == den && num_integer::Integer::is_odd(&quot)) {
        quot += 1;
    }
    let negative = q.is_negative() && !quot.is_zero();
    let digits_str = quot.to_string();
    let mut body = if digits == 0 {
        digits_str
    } else if digits_str.len() <= digits {
        format!("0.{:0>width$}", digits_str, width = digits)
    } else {
        let split = digits_str.len() - digits;
        format!("{}.{}", &digits_str[..split], &digits_str[split..])
    };
    if negative {
        body.insert(0, '-');
    }
    body
}

/// Floor of `√q` for a non-negative rational, as a big integer.
pub fn floor_sqrt(q: &Rat) -> BigInt {
    assert!(!q.is_negative(), "floor_sqrt of a negative rational");
    // floor(sqrt(n/d)) = floor(sqrt(n*d)/d) = floor(isqrt(n*d)/d) needs care;
    // use floor(sqrt(n/d)) = isqrt(floor(n/d)) only when exact, so instead
    // compute k = isqrt(n*d) and return k / d rounded down via rational check.
    let nd = q.numer() * q.denom();
    let k = num_integer::Roots::sqrt(&nd);
    let mut cand = &k / q.denom();
    // fix up: want largest integer c with c^2 <= q
    while Rat::from_integer(&cand * &cand + (&cand * 2) + 1) <= *q {
        cand += 1;
    }
    while Rat::from_integer(&cand * &cand) > *q {
        cand -= 1;
    }
    cand
}

/// Decimal rendering of `√q` (non-negative) with `digits` fractional digits.
pub fn sqrt_decimal_string(q: &Rat, digits: usize) -> String {
    assert!(!q.is_negative(), "sqrt_decimal_string of a negative rational");
    // Compute with guard digits, then round once.
    let guard = digits + 8;
    let scale = BigInt::from(10u8).pow(guard as u32);
    let scaled = q * Rat::from_integer(&scale * &scale);
    let root = floor_sqrt(&scaled); // |error| < 1 at 10^-guard scale
    let approx = Rat::new(root, scale);
    decimal_string(&approx, digits)
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

/// Exact JSON number from a big integer (requires serde_json's
/// arbitrary-precision feature, which this crate enables).
pub fn bigint_number(n: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&n.to_string()).expect("integer token")
}

/// `[numerator, denominator]` in lowest terms, denominator positive.
pub fn rat_value(q: &Rat) -> serde_json::Value {
    serde_json::Value::Array(vec![
        serde_json::Value::Number(bigint_number(q.numer())),
        serde_json::Value::Number(bigint_number(q.denom())),
    ])
}

/// Parse a JSON value as a big integer; accepts only integer numbers.
pub fn value_to_bigint(v: &serde_json::Value) -> Option<BigInt> {
    let n = v.as_number()?;
    BigInt::from_str(&n.to_string()).ok()
}

/// Parse `[num, den]` (or a bare integer) as a rational.
pub fn value_to_rat(v: &serde_json::Value) -> Option<Rat> {
    match v {
        serde_json::Value::Number(_) => Some(Rat::from_integer(value_to_bigint(v)?)),
        serde_json::Value::Array(parts) if parts.len() == 2 => {
            let num = value_to_bigint(&parts[0])?;
            let den = value_to_bigint(&parts[1])?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
        _ => None,
    }
}

/// Serde adapter: `#[serde(with = "crate::rat::rat_serde")]`.
pub mod rat_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        super::rat_value(q).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        super::value_to_rat(&v).ok_or_else(|| {
            DeError::custom("expected [numerator, denominator] with nonzero denominator")
        })
    }

    use serde::Serialize;
}

/// Serde adapter for `Option<Rat>`.
pub mod rat_opt_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rat>, ser: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => super::rat_value(q).serialize(ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rat>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(de)?;
        match v {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => super::value_to_rat(&v).map(Some).ok_or_else(|| {
                DeError::custom("expected [numerator, denominator] with nonzero denominator")
            }),
        }
    }
}

/// Serde adapter for `Vec<Rat>` as a list of `[num, den]` pairs.
pub mod rat_vec_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = v.iter().map(rat_value).collect();
        vals.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        let vals: Vec<serde_json::Value> = Vec::deserialize(de)?;
        vals.iter()
            .map(|x| value_to_rat(x).ok_or_else(|| DeError::custom("expected [num, den]")))
            .collect()
    }
}

/// Serde adapter for `BigInt` as an exact JSON integer.
pub mod bigint_serde {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        serde_json::Value::Number(super::bigint_number(n)).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        super::value_to_bigint(&v).ok_or_else(|| DeError::custom("expected an integer"))
    }
}
