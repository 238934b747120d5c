//! Run results and the structured output document.
//!
//! Structured output is a single JSON tree with the keys `meta`,
//! `inputs`, `results`, and `verdicts`. Floats are printed in scientific
//! notation with 17 significant digits so the document round-trips
//! losslessly; key order is insertion order, so identical runs produce
//! byte-identical documents. Wall time is reported on the human-readable
//! channel only, keeping the structured document deterministic.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use qvenn::DensityOperator;

/// Outcome of one CLI run, carrying both renderings.
pub struct RunResult {
    /// The structured document (meta, inputs, results, verdicts).
    pub tree: Value,
    /// Human-readable text (diagrams, tables).
    pub text: String,
    /// Wall time of the computation, reported outside the structured doc.
    pub wall_time: std::time::Duration,
    /// True when a verdict-style property failed (exit code 1 for verify).
    pub failed: bool,
}

/// Build the `meta`/`inputs` skeleton for a run.
pub fn meta_tree(command_echo: &str, extra: &[(&str, Value)]) -> Value {
    let mut meta = Map::new();
    meta.insert("command".into(), Value::String(command_echo.into()));
    meta.insert(
        "tool".into(),
        Value::String(format!("qvenn {}", env!("CARGO_PKG_VERSION"))),
    );
    for (k, v) in extra {
        meta.insert((*k).into(), v.clone());
    }
    Value::Object(meta)
}

/// Short hex digest of a state's entries at full precision; identifies
/// the parsed input independent of how it was specified.
pub fn state_digest(rho: &DensityOperator) -> String {
    let mut hasher = Sha256::new();
    for (label, dim) in rho.layout().parts() {
        hasher.update(label.as_bytes());
        hasher.update(dim.to_le_bytes());
    }
    for z in rho.entries().iter() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    let digest = hasher.finalize();
    hex_prefix(&digest, 16)
}

fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut s = String::with_capacity(chars);
    for b in bytes {
        use std::fmt::Write;
        write!(s, "{b:02x}").unwrap();
        if s.len() >= chars {
            break;
        }
    }
    s.truncate(chars);
    s
}

/// Render the structured tree with floats at 17 significant digits.
pub fn render_structured(tree: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, tree, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    out.push_str(&format_f64(f));
                } else {
                    out.push_str(&n.to_string());
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits in scientific notation: enough to reconstruct
/// the exact f64.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize the sign of zero for byte-stable output
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

/// Entropy formatted for the text channel: 6 decimals, bits suffix.
pub fn bits(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = if s == "-0.000000" { "0.000000".into() } else { s };
    format!("{s} b")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_at_17_digits() {
        for x in [std::f64::consts::PI, 0.6008760366928562, -1.0 / 3.0, 1e-12] {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn structured_rendering_is_stable() {
        let tree = json!({
            "meta": {"command": "demo"},
            "results": {"value": 0.5_f64, "count": 3},
            "verdicts": {"ok": true}
        });
        let a = render_structured(&tree);
        let b = render_structured(&tree);
        assert_eq!(a, b);
        assert!(a.contains("5.0000000000000000e-1"));
        // round-trips as JSON
        let back: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(back["results"]["count"], json!(3));
    }

    #[test]
    fn digest_distinguishes_states() {
        let a = qvenn::states::bell_state(qvenn::states::BellState::PhiPlus).to_density();
        let b = qvenn::states::bell_state(qvenn::states::BellState::PhiMinus).to_density();
        assert_ne!(state_digest(&a), state_digest(&b));
        assert_eq!(state_digest(&a).len(), 16);
    }
}
