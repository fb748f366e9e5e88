//! Rational numbers and the coefficient trait shared by the exact containers.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Comma separated list of rationals, e.g. `"1/2,0,-3"`.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rat).collect()
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integral(r: &Rat) -> bool {
    r.is_integer()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Coefficient ring for the generic exact containers: `Rat` and `MPoly`.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&rat(n))
    }

    /// Exact division; errors when the quotient does not exist in the ring.
    fn div_exact(&self, d: &Self) -> Result<Self>;
}

impl Coeff for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(self / d)
    }
}

/// Serde adapters that write rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{fmt_rat, parse_rat, Rat};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(fmt_rat))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
