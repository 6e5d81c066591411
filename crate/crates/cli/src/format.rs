//! Fixed-precision rendering of numbers, JSON documents and key/value tables.

use std::fmt::Write;

use serde_json::Value;

/// 17 significant digits in scientific notation; `nan`, `inf`, `-inf` otherwise.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn json_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        let x = n.as_f64().unwrap_or(f64::NAN);
        if x.is_finite() { num(x) } else { "null".into() }
    }
}

/// Indented JSON with every float at 17 significant digits.
pub fn to_json(value: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_json(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&json_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|v| v.is_number()) => {
            out.push('[');
            for (k, v) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_json(out, v, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, v) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_json(out, v, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, v)) in map.iter().enumerate() {
                pad(out, depth + 1);
                let _ = write!(out, "{}: ", Value::String(key.clone()));
                write_json(out, v, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

/// One `path  value` line per leaf.
pub fn to_table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten(&mut rows, String::new(), value);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

fn flatten(rows: &mut Vec<(String, String)>, path: String, value: &Value) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (key, v) in map {
                let p = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                flatten(rows, p, v);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (k, v) in items.iter().enumerate() {
                flatten(rows, format!("{path}[{k}]"), v);
            }
        }
        Value::String(s) => rows.push((path, s.clone())),
        Value::Number(n) => rows.push((path, json_number(n))),
        other => rows.push((path, other.to_string())),
    }
}
