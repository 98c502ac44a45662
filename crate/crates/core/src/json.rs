//! JSON helpers: fixed 17-significant-digit float output.
//!
//! `serde_json` prints the shortest round-trip form by default. Cone, model and
//! witness files use a fixed format instead, so that files written on
//! different machines and runs are byte-identical.

use serde::ser::{SerializeSeq, Serializer};
use serde_json::value::RawValue;

/// Formats a float with 17 significant digits in scientific notation
/// (`null` for non-finite values).
pub fn f17(x: f64) -> String {
    if x.is_finite() {
        // normalise negative zero so output does not depend on arithmetic order
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(f17(x)).expect("formatted float is valid JSON")
}

/// `serialize_with` adapter for a single float.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&raw(*x), s)
}

/// `serialize_with` adapter for a vector of floats.
pub fn ser_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&raw(*x))?;
    }
    seq.end()
}

/// `serialize_with` adapter for an optional vector of floats.
pub fn ser_opt_vec<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vec(v, s),
        None => s.serialize_none(),
    }
}

struct Row<'a>(&'a [f64]);

impl serde::Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_vec(self.0, s)
    }
}

/// `serialize_with` adapter for a matrix (vector of rows).
pub fn ser_mat<S: Serializer>(m: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for r in m {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

/// `serialize_with` adapter for an optional matrix.
pub fn ser_opt_mat<S: Serializer>(m: &Option<Vec<Vec<f64>>>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => ser_mat(m, s),
        None => s.serialize_none(),
    }
}

struct Mat<'a>(&'a [Vec<f64>]);

impl serde::Serialize for Mat<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_mat(self.0, s)
    }
}

/// `serialize_with` adapter for a rank-3 array.
pub fn ser_tensor3<S: Serializer>(t: &[Vec<Vec<f64>>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for m in t {
        seq.serialize_element(&Mat(m))?;
    }
    seq.end()
}
