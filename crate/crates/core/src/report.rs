//! Versioned JSON envelopes and flat CSV rendering for reports.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// `{"schema": 1, "command": ..., "seed": ..., "config": ..., "result": ...}`.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    pub seed: Option<u64>,
    pub config: &'a C,
    pub result: &'a R,
}

pub fn to_json<C: Serialize, R: Serialize>(
    command: &str,
    seed: Option<u64>,
    config: &C,
    result: &R,
) -> Result<String> {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        command,
        seed,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn cell(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some((*b as u8).to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains([',', '\n', '"']) => Some(s.clone()),
        Value::String(s) => Some(format!("\"{}\"", s.replace('"', "\"\""))),
        _ => None,
    }
}

/// One header line and one row holding the scalar top-level fields of
/// `result`; nested objects are flattened as `outer.inner`.
pub fn to_flat_csv<R: Serialize>(result: &R) -> Result<String> {
    let v = serde_json::to_value(result).map_err(|e| Error::Io(e.to_string()))?;
    let mut header = Vec::new();
    let mut row = Vec::new();
    flatten("", &v, &mut header, &mut row);
    Ok(format!("{}\n{}\n", header.join(","), row.join(",")))
}

fn flatten(prefix: &str, v: &Value, header: &mut Vec<String>, row: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, inner, header, row);
            }
        }
        other => {
            if let Some(c) = cell(other) {
                header.push(prefix.to_string());
                row.push(c);
            }
        }
    }
}
