//! Canonical JSON: sorted keys, two-space indentation, floats with 17
//! significant digits, non-finite floats as strings.

use std::fmt::Write;

use serde::Serialize;
use serde_value::Value;

use crate::error::CliError;

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let v = serde_value::to_value(value).map_err(|e| CliError::Report(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn key_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Char(c) => c.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::U8(x) => x.to_string(),
        Value::U16(x) => x.to_string(),
        Value::U32(x) => x.to_string(),
        Value::U64(x) => x.to_string(),
        Value::I8(x) => x.to_string(),
        Value::I16(x) => x.to_string(),
        Value::I32(x) => x.to_string(),
        Value::I64(x) => x.to_string(),
        other => format!("{other:?}"),
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::U8(x) => out.push_str(&x.to_string()),
        Value::U16(x) => out.push_str(&x.to_string()),
        Value::U32(x) => out.push_str(&x.to_string()),
        Value::U64(x) => out.push_str(&x.to_string()),
        Value::I8(x) => out.push_str(&x.to_string()),
        Value::I16(x) => out.push_str(&x.to_string()),
        Value::I32(x) => out.push_str(&x.to_string()),
        Value::I64(x) => out.push_str(&x.to_string()),
        Value::F32(x) => write_float(out, f64::from(*x)),
        Value::F64(x) => write_float(out, *x),
        Value::Char(c) => write_string(out, &c.to_string()),
        Value::String(s) => write_string(out, s),
        Value::Unit | Value::Option(None) => out.push_str("null"),
        Value::Option(Some(inner)) | Value::Newtype(inner) => write_value(out, inner, level),
        Value::Bytes(b) => write_value(
            out,
            &Value::Seq(b.iter().map(|&x| Value::U8(x)).collect()),
            level,
        ),
        Value::Seq(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // short rows of scalars stay on one line
            if items.len() <= 8 && items.iter().all(is_scalar) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, level);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, item, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Value::Map(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut entries: Vec<(String, &Value)> =
                map.iter().map(|(k, v)| (key_string(k), v)).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            out.push_str("{\n");
            for (i, (k, v)) in entries.iter().enumerate() {
                indent(out, level + 1);
                write_string(out, k);
                out.push_str(": ");
                write_value(out, v, level + 1);
                if i + 1 < entries.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        out.push_str(&format_float(x));
    } else {
        write_string(out, &format_float(x));
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Seq(_) | Value::Map(_))
        && !matches!(v, Value::Option(Some(inner)) | Value::Newtype(inner) if !is_scalar(inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn floats_keys_and_sentinels() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: Vec<f64>,
            n: usize,
        }
        let s = to_canonical_json(&S {
            zeta: 0.1,
            alpha: vec![1.0, f64::INFINITY],
            n: 3,
        })
        .unwrap();
        assert_eq!(
            s,
            "{\n  \"alpha\": [1.0000000000000000e0, \"inf\"],\n  \"n\": 3,\n  \"zeta\": 1.0000000000000001e-1\n}\n"
        );
    }

    #[test]
    fn hash_map_order_does_not_leak() {
        let mut m = HashMap::new();
        for k in ["b", "a", "c", "e", "d"] {
            m.insert(k.to_string(), 1u8);
        }
        let a = to_canonical_json(&m).unwrap();
        assert!(a.find("\"a\"").unwrap() < a.find("\"e\"").unwrap());
    }
}
