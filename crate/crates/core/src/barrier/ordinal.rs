//! Ordinals below `ω^ω` in Cantor normal form.
//!
//! An [`OrdinalCNF`] is a coefficient list `c₀, c₁, …, c_d` denoting
//! `c_d·ω^d + … + c₁·ω + c₀`.  This range is exactly what the barrier
//! grammar can produce, and it is closed under the (non-commutative)
//! ordinal addition that ranks of sums require.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Defensive cap on the ω-degree; the public grammar cannot reach it.
const MAX_DEGREE: usize = 64;

/// An ordinal `< ω^ω` as its CNF coefficient list (index = ω-exponent).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrdinalCNF(Vec<u64>);

impl<'de> Deserialize<'de> for OrdinalCNF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(d)?;
        OrdinalCNF::from_coeffs(v).map_err(serde::de::Error::custom)
    }
}

impl OrdinalCNF {
    /// Build from a coefficient list `c₀, c₁, …` (trailing zeros trimmed).
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE {
            return Err(Error::RankOverflow);
        }
        Ok(OrdinalCNF(coeffs))
    }

    pub fn zero() -> Self {
        OrdinalCNF(Vec::new())
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF(vec![n])
        }
    }

    /// The ordinal `ω`.
    pub fn omega() -> Self {
        OrdinalCNF(vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.len() <= 1
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.0.len() {
            0 => Some(0),
            1 => Some(self.0[0]),
            _ => None,
        }
    }

    /// Degree of the leading ω-power.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// Ordinal addition `self + other`.  Non-commutative: every term of
    /// `self` below the leading ω-power of `other` is absorbed.
    pub fn add(&self, other: &OrdinalCNF) -> OrdinalCNF {
        if other.is_zero() {
            return self.clone();
        }
        let e = other.degree();
        let mut coeffs = other.0.clone();
        if self.0.len() > e {
            coeffs[e] += self.0[e];
            coeffs.extend_from_slice(&self.0[e + 1..]);
        }
        OrdinalCNF(coeffs)
    }

    /// Successor ordinal `self + 1`.
    pub fn succ(&self) -> OrdinalCNF {
        self.add(&OrdinalCNF::finite(1))
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalCNF {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Compare by degree, then coefficients from the top down.
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl std::fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match exp {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "ω")?,
                1 => write!(f, "ω·{c}")?,
                _ if c == 1 => write!(f, "ω^{exp}")?,
                _ => write!(f, "ω^{exp}·{c}")?,
            }
        }
        Ok(())
    }
}
