use num_bigint::BigUint;
use serde::Serialize;

pub fn biguint_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn hex_string<S: serde::Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&hex::encode(v))
}

/// One compared quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub field: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Check {
    pub fn new(field: &str, expected: impl ToString, actual: impl ToString) -> Check {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { field: field.to_string(), ok: expected == actual, expected, actual }
    }
}
