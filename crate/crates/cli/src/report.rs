//! Reports are built once as a JSON value and rendered either as JSON or as
//! indented text, so both formats carry the same numbers.

use serde_json::{json, Map, Value};
use spin_gpc::qparam::QValue;
use spin_gpc::rational::{fraction_string, to_f64};
use spin_gpc::Q;

/// Exact rational with its decimal approximation.
pub fn exact(x: &Q) -> Value {
    json!({ "exact": fraction_string(x), "decimal": float(to_f64(x)) })
}

pub fn exact_list(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(exact).collect())
}

/// Floats; non-finite values become string tokens.
pub fn float(x: f64) -> Value {
    if x == 0.0 {
        json!(0.0)
    } else if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

pub fn float_list(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn qvalue(v: QValue) -> Value {
    match v {
        QValue::Finite(x) => float(x),
        QValue::Infinite => json!("+inf"),
        QValue::TriviallyPinned => json!("TRIVIALLY_PINNED"),
        QValue::NotApplicable => json!("NOT_APPLICABLE"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text_value(v, 0, &mut out);
            out
        }
    }
}

fn as_exact(m: &Map<String, Value>) -> Option<String> {
    if m.len() != 2 {
        return None;
    }
    let e = m.get("exact")?.as_str()?;
    let d = m.get("decimal")?;
    Some(format!("{e} ({})", scalar(d)?))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) => as_exact(m),
        Value::Array(_) => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let items = v.as_array()?;
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

fn text_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) if as_exact(m).is_none() => {
            for (k, x) in m {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_value(x, indent + 1, out);
                    }
                }
            }
        }
        other => {
            if let Some(s) = inline(other) {
                out.push_str(&format!("{pad}{s}\n"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spin_gpc::rational::qf;

    #[test]
    fn exact_numbers_render_in_both_formats() {
        let v = json!({ "x": exact(&qf(3, 100)), "list": [1, 2], "nested": { "q": qvalue(QValue::Infinite) } });
        let text = render(&v, Format::Text);
        assert!(text.contains("x: 3/100 (0.03)"));
        assert!(text.contains("list: [1, 2]"));
        assert!(text.contains("q: +inf"));
        let back: Value = serde_json::from_str(&render(&v, Format::Json)).unwrap();
        assert_eq!(back, v);
        assert_eq!(float(f64::INFINITY), json!("+inf"));
    }
}
