//! Report rendering: deterministic field order, 17-significant-digit
//! floats (lossless for f64), and refusal of non-finite values.

use serde_json::Value;
use std::fmt::Write as _;

/// serde_json maps non-finite floats to `null`; report payloads carry no
/// legitimate nulls, so any `null` means a NaN or infinity leaked in.
pub fn find_non_finite(value: &Value, path: &mut String) -> Option<String> {
    match value {
        Value::Null => Some(if path.is_empty() {
            "/".to_string()
        } else {
            path.clone()
        }),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                let len = path.len();
                let _ = write!(path, "/{i}");
                if let Some(p) = find_non_finite(item, path) {
                    return Some(p);
                }
                path.truncate(len);
            }
            None
        }
        Value::Object(map) => {
            for (k, v) in map {
                let len = path.len();
                let _ = write!(path, "/{k}");
                if let Some(p) = find_non_finite(v, path) {
                    return Some(p);
                }
                path.truncate(len);
            }
            None
        }
        _ => None,
    }
}

/// Pretty-prints a JSON value with objects in key order (serde_json's map
/// is sorted) and every float rendered as `{:.16e}`: 17 significant digits,
/// which round-trips f64 exactly.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().expect("is_f64"));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(out, v, indent + 1);
            }
            out.push('\n');
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_through_rendering() {
        let v = json!({"x": 0.1 + 0.2, "pi": std::f64::consts::PI, "k": 7});
        let text = render(&v);
        assert!(text.contains("\"k\": 7"), "integers stay integers: {text}");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(back["pi"].as_f64().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn nulls_are_located() {
        let v = json!({"a": [1.0, {"b": null}]});
        let mut path = String::new();
        assert_eq!(find_non_finite(&v, &mut path).unwrap(), "/a/1/b");
        let clean = json!({"a": [1.0, 2.0]});
        let mut path = String::new();
        assert!(find_non_finite(&clean, &mut path).is_none());
    }

    #[test]
    fn object_keys_render_sorted() {
        let v = json!({"zeta": 1, "alpha": 2});
        let text = render(&v);
        let za = text.find("zeta").unwrap();
        let al = text.find("alpha").unwrap();
        assert!(al < za);
    }
}
