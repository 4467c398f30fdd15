//! Exact cyclotomic scalars, matrices over them, and their JSON forms.

pub mod linalg;
pub mod matrix;
pub mod rational;
pub mod scalar;

pub use matrix::{inner, CycMatrix};
pub use rational::Rational;
pub use scalar::{CycScalar, MAX_ORDER};

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

fn int_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub(crate) fn rational_to_json(q: &Rational) -> Value {
    json!([int_to_json(&q.numer()), int_to_json(&q.denom())])
}

pub(crate) fn rational_from_json(v: &Value) -> Option<Rational> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            Rational::from_big(int_from_json(&a[0])?, int_from_json(&a[1])?)
        }
        Value::Number(_) | Value::String(_) => Rational::from_big(int_from_json(v)?, 1.into()),
        _ => None,
    }
}

fn coeffs_json(s: &CycScalar) -> Value {
    Value::Array(s.coeffs().iter().map(rational_to_json).collect())
}

fn coeffs_from_json(order: u64, v: &Value) -> Result<CycScalar, String> {
    let arr = v.as_array().ok_or("coefficients must be an array")?;
    let raw = arr
        .iter()
        .map(|c| rational_from_json(c).ok_or_else(|| format!("bad rational {c}")))
        .collect::<Result<Vec<_>, _>>()?;
    CycScalar::canonicalize(order, raw).map_err(|e| e.to_string())
}

impl CycScalar {
    pub fn to_json(&self) -> Value {
        json!({ "order": self.order(), "coeffs": coeffs_json(self) })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let order = v["order"].as_u64().ok_or("missing order")?;
        coeffs_from_json(order, &v["coeffs"])
    }
}

impl CycMatrix {
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "order": self.order(),
            "entries": self.entries().iter().map(coeffs_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let rows = v["rows"].as_u64().ok_or("missing rows")? as usize;
        let cols = v["cols"].as_u64().ok_or("missing cols")? as usize;
        let order = v["order"].as_u64().ok_or("missing order")?;
        let entries = v["entries"]
            .as_array()
            .ok_or("missing entries")?
            .iter()
            .map(|e| coeffs_from_json(order, e))
            .collect::<Result<Vec<_>, _>>()?;
        CycMatrix::new(rows, cols, entries).map_err(|e| e.to_string())
    }
}

/// Serialises a vector of scalars as a list of scalar objects.
pub fn vector_to_json(v: &[CycScalar]) -> Value {
    Value::Array(v.iter().map(CycScalar::to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<Vec<CycScalar>, String> {
    v.as_array()
        .ok_or("vector must be an array")?
        .iter()
        .map(CycScalar::from_json)
        .collect()
}

macro_rules! json_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                self.to_json().serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let v = Value::deserialize(d)?;
                <$t>::from_json(&v).map_err(D::Error::custom)
            }
        }
    };
}

json_serde!(CycScalar);
json_serde!(CycMatrix);
