//! Reference values and helpers shared by the integration tests.
//!
//! The `oracle` functions recompute the library's quantities from their raw
//! definitions (raw moments, direct sums) without touching its internals.

#![allow(dead_code, clippy::excessive_precision)]

pub mod oracle;

use serde_json::Value;

/// `|a - b| <= rel * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}

/// Structural JSON comparison with numbers compared via [`close`]. Returns
/// the path of the first difference.
pub fn json_diff(expected: &Value, actual: &Value, rel: f64) -> Option<String> {
    fn walk(path: &str, e: &Value, a: &Value, rel: f64) -> Option<String> {
        match (e, a) {
            (Value::Number(x), Value::Number(y)) => {
                let (x, y) = (x.as_f64()?, y.as_f64()?);
                (!close(x, y, rel)).then(|| format!("{path}: {x} vs {y}"))
            }
            (Value::Object(x), Value::Object(y)) => {
                if x.len() != y.len() || x.keys().zip(y.keys()).any(|(k, l)| k != l) {
                    return Some(format!("{path}: keys differ"));
                }
                x.iter()
                    .find_map(|(k, v)| walk(&format!("{path}.{k}"), v, &y[k], rel))
            }
            (Value::Array(x), Value::Array(y)) => {
                if x.len() != y.len() {
                    return Some(format!("{path}: length {} vs {}", x.len(), y.len()));
                }
                x.iter()
                    .zip(y)
                    .enumerate()
                    .find_map(|(i, (v, w))| walk(&format!("{path}[{i}]"), v, w, rel))
            }
            _ => (e != a).then(|| format!("{path}: {e} vs {a}")),
        }
    }
    walk("$", expected, actual, rel)
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}
