//! Serde helpers for big integers: values that fit in 64 bits are written as
//! JSON numbers, larger ones as decimal strings. Both forms are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Str(String),
}

fn to_repr(x: &BigInt) -> Repr {
    match x.to_i64() {
        Some(v) => Repr::Int(v),
        None => Repr::Str(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
    match r {
        Repr::Int(v) => Ok(BigInt::from(v)),
        Repr::Str(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
    }
}

pub fn to_value(x: &BigInt) -> serde_json::Value {
    serde_json::to_value(to_repr(x)).expect("plain value")
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_repr(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}

/// Rationals as `"num/den"` strings (or plain integers when the denominator is 1).
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if x.is_integer() {
            to_repr(x.numer()).serialize(s)
        } else {
            format!("{}/{}", x.numer(), x.denom()).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigRational::from_integer(v.into())),
            Repr::Str(s) => match s.split_once('/') {
                Some((n, m)) => {
                    let n: BigInt = n.parse().map_err(D::Error::custom)?;
                    let m: BigInt = m.parse().map_err(D::Error::custom)?;
                    Ok(BigRational::new(n, m))
                }
                None => Ok(BigRational::from_integer(
                    s.parse().map_err(D::Error::custom)?,
                )),
            },
        }
    }
}

pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::rational")] BigRational);

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(|x| Wrap(x.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}
