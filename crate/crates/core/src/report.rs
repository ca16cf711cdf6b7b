//! Serialisation helpers.

use serde::Serializer;

use crate::arith::Rational;

/// Serialise a rational as `"n/d"` (or `"n"` for integers).
pub fn rational_str<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
