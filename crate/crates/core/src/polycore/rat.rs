use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(v: &Rat) -> bool {
    v.denom().is_one()
}

/// Formats as `num/den`, including `n/1` for integers and `0/1` for zero.
pub fn format_rat(v: &Rat) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `num/den` or a bare integer. Decimal and exponent literals are
/// rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (parse_int(n)?, parse_int(d)?),
        None => (parse_int(s)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    t.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Serde adapter writing a [`Rat`] as a `"num/den"` string.
pub mod rat_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(de::Error::custom)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rat, parse_rat, Rat};

        pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_str(&format_rat(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
