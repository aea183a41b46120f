//! Reports are JSON values; the text form is rendered from the same value,
//! so both carry the same fields in the same order.

use serde_json::Value;

/// Pretty JSON with a trailing newline.
pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// `key: value` lines. Nested objects are indented by two spaces, lists of
/// objects use `- ` items, `null` prints as `none`.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = report {
        for (k, v) in map {
            field(&mut out, 0, k, v);
        }
    } else {
        out.push_str(&scalar(report));
        out.push('\n');
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn is_nested(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(|i| matches!(i, Value::Object(_) | Value::Array(_))),
        _ => false,
    }
}

fn field(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = " ".repeat(indent);
    if !is_nested(v) {
        out.push_str(&format!("{pad}{key}: {}\n", scalar(v)));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                field(out, indent + 2, k, x);
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(map) => {
                        let mut first = true;
                        for (k, x) in map {
                            let mut inner = String::new();
                            field(&mut inner, indent + 4, k, x);
                            if first {
                                inner.replace_range(indent + 2..indent + 4, "- ");
                                first = false;
                            }
                            out.push_str(&inner);
                        }
                    }
                    other => out.push_str(&format!("{pad}  - {}\n", scalar(other))),
                }
            }
        }
        _ => unreachable!(),
    }
}
