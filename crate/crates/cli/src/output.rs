//! Report assembly and deterministic rendering.
//!
//! Every numeric payload value is rounded to 12 significant digits before
//! it enters the report, so the text, CSV, and JSON renderings all carry
//! the same numbers and identical argv produces byte-identical output.

use serde_json::{Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 12-significant-digit rendering; plain decimal in a moderate exponent
/// range, scientific outside it, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let epos = sci.find('e').expect("scientific format");
    let exp: i32 = sci[epos + 1..].parse().expect("exponent");
    if !(-5..=14).contains(&exp) {
        return sci;
    }
    let decimals = (11 - exp).max(0) as usize;
    let plain = format!("{:.*}", decimals, x);
    if plain.contains('.') {
        plain
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        plain
    }
}

/// The double nearest to the 12-significant-digit decimal rendering.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format_sig(x).parse().expect("rendered float parses back")
}

/// JSON number carrying the rounded value.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(round_sig(x)) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    match x {
        Some(v) => num(v),
        None => Value::Null,
    }
}

/// The report envelope shared by every command.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub payload: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        top.insert("params".into(), self.params.clone());
        top.insert("payload".into(), self.payload.clone());
        top.insert("version".into(), Value::String(TOOL_VERSION.into()));
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} (cayley-qmc {})\n",
            self.command, TOOL_VERSION
        ));
        render_text(&self.params, "", &mut out);
        render_text(&self.payload, "", &mut out);
        out
    }

    /// Generic CSV: flattened scalar fields as one header plus one row.
    /// Commands with natural tables (phase-diagram, trajectory, verify)
    /// build their CSV directly instead.
    pub fn to_flat_csv(&self) -> String {
        let mut fields = Vec::new();
        flatten(&self.params, "", &mut fields);
        flatten(&self.payload, "", &mut fields);
        let header: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
        let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

pub fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(val, &key, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                render_text(val, &format!("{prefix}[{i}]"), out);
            }
        }
        scalar => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&scalar_to_string(scalar));
            out.push('\n');
        }
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(val, &key, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten(val, &format!("{prefix}[{i}]"), out);
            }
        }
        scalar => out.push((prefix.to_string(), scalar_to_string(scalar))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(3.0), "3");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(0.5493061443340549), "0.549306144334");
        assert_eq!(format_sig(0.16), "0.16");
        assert_eq!(format_sig(6.854101966249685), "6.85410196625");
        assert_eq!(format_sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(format_sig(1.0e-7), "1.00000000000e-7");
        assert_eq!(format_sig(2.56e17), "2.56000000000e17");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.8944271909999159, 1.0 / 3.0, 123.456, 1e-9, -0.149071] {
            let once = round_sig(x);
            assert_eq!(round_sig(once), once);
        }
    }

    #[test]
    fn text_rendering_walks_nested_values() {
        let report = Report {
            command: "demo",
            params: serde_json::json!({"k": 2}),
            payload: serde_json::json!({"a": {"b": 1.5}, "list": [1, 2]}),
        };
        let text = report.to_text();
        assert!(text.contains("k = 2\n"));
        assert!(text.contains("a.b = 1.5\n"));
        assert!(text.contains("list[1] = 2\n"));
    }
}
