//! Exact rational scalars and their string form.
//!
//! Rationals are written as `"numerator/denominator"` with the denominator
//! always present, e.g. `"-153/14"` or `"0/1"`. Parsing also accepts a bare
//! integer.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `true` when `x` is an integer.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Multiplicity of `p` in a nonzero integer.
pub(crate) fn multiplicity(p: u64, n: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return count;
        }
        n = q;
        count += 1;
    }
}

/// A run of rationals written over one common denominator.
#[derive(Debug, Clone)]
pub(crate) struct CommonDenominator {
    pub den: BigInt,
    pub nums: Vec<BigInt>,
}

impl CommonDenominator {
    pub fn new(xs: &[Rational]) -> Self {
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Self { den, nums }
    }

    /// Appends `x`, rescaling the stored numerators if its denominator
    /// introduces new factors.
    pub fn push(&mut self, x: &Rational) {
        let lcm = self.den.lcm(x.denom());
        if lcm != self.den {
            let scale = &lcm / &self.den;
            for v in &mut self.nums {
                *v *= &scale;
            }
            self.den = lcm;
        }
        self.nums.push(x.numer() * (&self.den / x.denom()));
    }

    pub fn empty() -> Self {
        Self { den: BigInt::one(), nums: Vec::new() }
    }
}

pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}
