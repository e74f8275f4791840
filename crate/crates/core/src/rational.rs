//! Exact rationals in result documents.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced fraction, serialized as `{"num": n, "den": d}` with `d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Ratio<i64>);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    num: i64,
    den: i64,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Doc { num: *self.0.numer(), den: *self.0.denom() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = Doc::deserialize(d)?;
        if doc.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational(Ratio::new(doc.num, doc.den)))
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
