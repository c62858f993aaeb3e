use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    /// sha256 over the input file digests and the result-defining parameters.
    pub inputs_digest: String,
    pub stages: Vec<Stage>,
    pub result: Value,
    pub citations: Vec<String>,
    pub summary: Summary,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn combined_digest(inputs: &[InputDigest], parameters: &Value) -> String {
    let doc = serde_json::json!({
        "files": inputs.iter().map(|i| i.sha256.as_str()).collect::<Vec<_>>(),
        "parameters": parameters,
    });
    sha256_hex(doc.to_string().as_bytes())
}

impl PipelineReport {
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One `path: value` line per leaf; arrays of scalars stay on one line.
    /// Numbers are printed exactly as in the JSON rendering.
    pub fn render_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        out.push_str(&format!(
            "{} {}\n",
            if self.summary.passed { "PASS" } else { "FAIL" },
            self.summary.message
        ));
        flatten(&value, "", &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(x, &p, out);
            }
        }
        Value::Object(_) => out.push_str(&format!("{prefix}: {{}}\n")),
        Value::Array(a) => {
            if let Some(items) = a.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
            } else {
                for (i, x) in a.iter().enumerate() {
                    flatten(x, &format!("{prefix}[{i}]"), out);
                }
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v).unwrap_or_default())),
    }
}
