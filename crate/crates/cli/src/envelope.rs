//! The JSON envelope around every result, and its canonical text form.

use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct ResultEnvelope {
    pub version: String,
    pub command: String,
    pub config: Value,
    pub payload: Value,
    pub elapsed_ms: u64,
}

impl ResultEnvelope {
    pub fn to_value(&self) -> Value {
        json!({
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "payload": self.payload,
            "timing": { "elapsed_ms": self.elapsed_ms },
        })
    }

    pub fn from_value(v: &Value) -> Option<Self> {
        Some(ResultEnvelope {
            version: v.get("version")?.as_str()?.to_string(),
            command: v.get("command")?.as_str()?.to_string(),
            config: v.get("config")?.clone(),
            payload: v.get("payload")?.clone(),
            elapsed_ms: v.get("timing")?.get("elapsed_ms")?.as_u64()?,
        })
    }
}

/// Compact JSON with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_canonical(&m[key], out);
            }
            out.push('}');
        }
        Value::Array(a) => {
            out.push('[');
            for (k, x) in a.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_canonical(x, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Canonical text, indented for people; same key order as `canonical`.
pub fn pretty(v: &Value) -> String {
    let sorted: Value = serde_json::from_str(&canonical(v)).expect("canonical JSON parses");
    serde_json::to_string_pretty(&sorted).expect("JSON value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted_recursively() {
        let v = json!({"b": 1, "a": {"z": [3, {"y": 1, "x": 2}], "c": "s"}});
        assert_eq!(canonical(&v), r#"{"a":{"c":"s","z":[3,{"x":2,"y":1}]},"b":1}"#);
    }

    #[test]
    fn envelope_round_trips() {
        let e = ResultEnvelope {
            version: VERSION.into(),
            command: "witt".into(),
            config: json!({"p": 2}),
            payload: json!({"holds": true, "groups": [{"free_rank": 0, "exponents": [2, 1]}]}),
            elapsed_ms: 17,
        };
        let text = canonical(&e.to_value());
        let back = ResultEnvelope::from_value(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(canonical(&back.to_value()), text);
    }
}
