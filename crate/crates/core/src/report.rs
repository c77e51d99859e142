//! JSON and CSV helpers: counts as decimal strings, reals with 17 significant digits.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A real with 17 significant digits as a raw JSON number (`null` if not finite).
pub fn real17(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { fmt17(x) } else { "null".to_string() };
    RawValue::from_string(text).expect("valid JSON number")
}

/// 17 significant digits in scientific notation, e.g. `7.4641016151377544e0`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Nearest `f64` to a big count (`inf` beyond the `f64` range).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub(crate) fn real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    real17(*x).serialize(s)
}

pub(crate) fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([real17(z.re), real17(z.im)])
}

pub(crate) fn complex_list<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(zs.iter().map(|z| [real17(z.re), real17(z.im)]))
}
