//! JSON encoding for big integers: a plain number when it fits in 64
//! bits, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Big(String),
}

fn to_repr(v: &BigInt) -> Repr {
    match v.to_i64() {
        Some(i) => Repr::Int(i),
        None => Repr::Big(v.to_string()),
    }
}

fn from_repr<E: de::Error>(r: Repr) -> Result<BigInt, E> {
    match r {
        Repr::Int(i) => Ok(BigInt::from(i)),
        Repr::Big(s) => s.parse().map_err(E::custom),
    }
}

/// The same encoding as a [`serde_json::Value`].
pub fn to_value(v: &BigInt) -> serde_json::Value {
    serde_json::to_value(to_repr(v)).expect("plain data")
}

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_repr(v).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_repr(Repr::deserialize(d)?)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(to_repr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr)
            .collect()
    }
}
