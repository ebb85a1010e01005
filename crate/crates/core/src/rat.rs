//! Exact rational helpers: parsing, formatting, and serde adapters.
//!
//! Rationals cross every API boundary as `"p/q"` strings (plain `"p"` for
//! integers) so that reports stay exact and byte-stable.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::Error;

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Schema(format!("bad rational numerator `{num}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Schema(format!("bad rational denominator `{den}`")))?;
    if d.is_zero() {
        return Err(Error::Schema(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

/// Format a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn fmt(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand for small rational constants in code and tests.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for integer rationals.
pub fn qi(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// serde adapter: rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: vectors of rationals as `"p/q"` string arrays.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A certified bracket `[lo, hi]` around a quantity that is only sampled.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    #[serde(with = "serde_rat")]
    pub lo: BigRational,
    #[serde(with = "serde_rat")]
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "interval ends out of order");
        Interval { lo, hi }
    }

    /// Exact point interval.
    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", fmt(&self.lo), fmt(&self.hi))
    }
}

/// Absolute value helper (num's `Signed::abs` with rational receiver).
pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}
