//! Serializes arbitrary-precision integers as plain JSON numbers.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn to_number(v: &BigInt) -> serde_json::Number {
    v.to_string().parse().expect("decimal integers are valid JSON numbers")
}

pub fn from_number(n: &serde_json::Number) -> Result<BigInt, String> {
    let text = n.to_string();
    text.parse::<BigInt>().map_err(|_| format!("expected an integer, found {text}"))
}

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_number(v).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(d)?;
    from_number(&n).map_err(serde::de::Error::custom)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<serde_json::Number> = v.iter().map(to_number).collect();
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        nums.iter().map(|n| from_number(n).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(to_number).serialize(s)
    }
}

pub mod option_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|xs| xs.iter().map(to_number).collect::<Vec<_>>()).serialize(s)
    }
}
