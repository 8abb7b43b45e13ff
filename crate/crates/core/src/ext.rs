//! Rationals extended by `+∞`, the codomain of every valuation in the crate.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"n"`, `"-n"` or `"n/d"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Variant order matters: the derived `Ord` puts every finite value below `Inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRational {
    Fin(Q),
    Inf,
}

impl ExtRational {
    pub fn int(n: i64) -> Self {
        ExtRational::Fin(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ExtRational::Fin(q(n, d))
    }

    pub fn zero() -> Self {
        ExtRational::Fin(Q::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRational::Inf)
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtRational::Fin(x) => Some(x),
            ExtRational::Inf => None,
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        match self {
            ExtRational::Fin(x) => ExtRational::Fin(x * k),
            ExtRational::Inf => {
                assert!(k.is_positive(), "scaling +inf by a non-positive rational");
                ExtRational::Inf
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            ExtRational::Fin(x) => x.to_f64().unwrap_or(f64::NAN),
            ExtRational::Inf => f64::INFINITY,
        }
    }
}

impl From<Q> for ExtRational {
    fn from(x: Q) -> Self {
        ExtRational::Fin(x)
    }
}

impl From<i64> for ExtRational {
    fn from(n: i64) -> Self {
        ExtRational::int(n)
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Fin(a), ExtRational::Fin(b)) => ExtRational::Fin(a + b),
            _ => ExtRational::Inf,
        }
    }
}

impl Add<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        self.clone() + rhs.clone()
    }
}

impl Add<Q> for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: Q) -> ExtRational {
        self + ExtRational::Fin(rhs)
    }
}

impl Sub<Q> for ExtRational {
    type Output = ExtRational;
    fn sub(self, rhs: Q) -> ExtRational {
        self + ExtRational::Fin(-rhs)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Fin(x) if x.denom().is_one() => write!(f, "{}", x.numer()),
            ExtRational::Fin(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            ExtRational::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "+inf" | "∞" | "+∞" => Ok(ExtRational::Inf),
            other => parse_q(other).map(ExtRational::Fin),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inf_is_maximal_and_absorbing() {
        assert!(ExtRational::int(1_000_000) < ExtRational::Inf);
        assert!(ExtRational::frac(-1, 2) < ExtRational::zero());
        assert_eq!(ExtRational::Inf + ExtRational::int(-5), ExtRational::Inf);
        assert_eq!(
            ExtRational::frac(1, 2) + ExtRational::frac(1, 3),
            ExtRational::frac(5, 6)
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["-1/2", "3", "inf", "0", "-7/4"] {
            let x: ExtRational = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert!("1/0".parse::<ExtRational>().is_err());
        assert!("half".parse::<ExtRational>().is_err());
    }
}
