//! Helpers around [`Rational`](crate::Rational).

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::Rational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn from_usize(x: usize) -> Rational {
    Rational::from_integer(BigInt::from(x as u64))
}

/// Lossy conversion for reporting; huge denominators underflow to 0.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        if n - d < -1000 {
            0.0
        } else {
            f64::NAN
        }
    })
}

/// Parses `p/q`, `p` or a terminating decimal such as `0.25`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Some(Rational::new(digits, den));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_str {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Like [`serde_str`] for vectors of rationals.
pub mod serde_vec {
    use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| {
                super::parse(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect()
    }
}
