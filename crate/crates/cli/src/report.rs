//! Plain-text rendering of JSON reports, and small value helpers.

use holokernel::scalar::{self, Scalar};
use num::complex::Complex64;
use serde_json::{json, Value};

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|x| match x {
                    Value::Array(_) | Value::Object(_) => None,
                    x => inline(x),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Object(_) => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 2, out);
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
                        render(x, indent + 2, out);
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", inline(x).unwrap_or_default())),
    }
}

/// Indented `key: value` lines; keys come out sorted.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

pub(crate) fn rat(x: &Scalar) -> Value {
    Value::String(scalar::format(x))
}

pub(crate) fn rats(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub(crate) fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Components separated by commas, each a rational.
pub(crate) fn parse_rationals(s: &str) -> Result<Vec<Scalar>, String> {
    s.split(',')
        .map(|t| scalar::parse(t.trim()).map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

/// Components `re:im` separated by commas; a bare number is real.
pub(crate) fn parse_complex(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (re, im) = t.split_once(':').unwrap_or((t, "0"));
            let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
            Ok(Complex64::new(p(re)?, p(im)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_rendering() {
        let v = json!({"b": [1, 2], "a": {"x": "1/2", "y": null}, "c": [{"k": true}]});
        assert_eq!(
            render_text(&v),
            "a:\n  x: 1/2\n  y: none\nb: [1, 2]\nc:\n  -\n    k: true\n"
        );
    }

    #[test]
    fn parses_grid_points() {
        assert_eq!(
            parse_complex("0:6.5, -1").unwrap(),
            vec![Complex64::new(0.0, 6.5), Complex64::new(-1.0, 0.0)]
        );
        assert!(parse_complex("a:1").is_err());
        assert_eq!(
            parse_rationals("2,-1/3").unwrap(),
            vec![scalar::int(2), scalar::frac(-1, 3)]
        );
    }
}
