//! One report per invocation, rendered either as text or as a JSON document.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "symtrop/1";

#[derive(Debug, Clone)]
pub struct Report {
    pub command: Vec<String>,
    pub input_digest: Option<String>,
    /// First line of the text rendering.
    pub summary: String,
    pub fields: Vec<(String, Value)>,
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(summary: impl Into<String>) -> Self {
        Report { command: Vec::new(), input_digest: None, summary: summary.into(), fields: Vec::new(), elapsed_ms: None }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn digest_of(mut self, canonical: &str) -> Self {
        self.input_digest = Some(digest(canonical));
        self
    }

    pub fn to_structured(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        doc.insert("command".into(), json!(self.command));
        doc.insert("input_digest".into(), json!(self.input_digest));
        doc.insert("summary".into(), json!(self.summary));
        doc.insert("result".into(), Value::Object(self.fields.iter().cloned().collect()));
        if let Some(ms) = self.elapsed_ms {
            doc.insert("elapsed_ms".into(), json!(ms));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.summary);
        for (key, value) in &self.fields {
            match value {
                Value::String(s) if s.contains('\n') => {
                    out.push_str(&format!("{key}:\n{}", s));
                    if !s.ends_with('\n') {
                        out.push('\n');
                    }
                }
                Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
                other => out.push_str(&format!("{key}: {other}\n")),
            }
        }
        if let Some(digest) = &self.input_digest {
            out.push_str(&format!("input_digest: {digest}\n"));
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms: {ms:.3}\n"));
        }
        out
    }
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
