//! Deterministic JSON rendering.

use serde::Serialize;

/// Pretty JSON with object keys sorted, so equal values always render to the
/// same bytes.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("json value renders");
    s.push('\n');
    s
}
