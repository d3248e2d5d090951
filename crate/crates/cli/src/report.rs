//! Command output: one JSON document or a CSV table per run. Every number is
//! emitted as a decimal string.

use std::fmt::Display;

use serde_json::{Map, Value};

/// Outcome class of a run, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Negative,
    Capacity,
    Indeterminate,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Capacity => 3,
            Status::Indeterminate => 4,
        }
    }
}

/// Exit code for malformed input.
pub const INPUT_ERROR: u8 = 2;

#[derive(Clone, Debug, Default)]
pub struct Entry(Map<String, Value>);

impl Entry {
    pub fn new(name: &str) -> Self {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(name.into()));
        Entry(m)
    }

    pub fn n(self, n: usize) -> Self {
        self.field("n", n)
    }

    pub fn value(self, v: impl Display) -> Self {
        self.field("value", v)
    }

    pub fn verdict(self, v: impl Display) -> Self {
        self.field("verdict", v)
    }

    pub fn field(mut self, key: &str, v: impl Display) -> Self {
        self.0.insert(key.into(), Value::String(v.to_string()));
        self
    }

    pub fn json(mut self, key: &str, v: Value) -> Self {
        self.0.insert(key.into(), v);
        self
    }

    pub fn maybe(self, key: &str, v: Option<impl Display>) -> Self {
        match v {
            Some(v) => self.field(key, v),
            None => self,
        }
    }
}

/// Array of decimal strings.
pub fn strings<T: Display>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|v| Value::String(v.to_string())).collect())
}

pub struct Report {
    pub command: String,
    config: Map<String, Value>,
    results: Vec<Entry>,
    telemetry: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            config: Map::new(),
            results: Vec::new(),
            telemetry: Map::new(),
            status: Status::Ok,
        }
    }

    pub fn config(&mut self, key: &str, v: impl Display) {
        self.config.insert(key.into(), Value::String(v.to_string()));
    }

    pub fn telemetry(&mut self, key: &str, v: impl Display) {
        self.telemetry.insert(key.into(), Value::String(v.to_string()));
    }

    pub fn push(&mut self, e: Entry) {
        self.results.push(e);
    }

    /// Raises the status; the worst outcome wins.
    pub fn raise(&mut self, s: Status) {
        self.status = self.status.max(s);
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        doc.insert("config".into(), Value::Object(self.config.clone()));
        doc.insert(
            "results".into(),
            Value::Array(self.results.iter().map(|e| Value::Object(e.0.clone())).collect()),
        );
        doc.insert("telemetry".into(), Value::Object(self.telemetry.clone()));
        let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialise");
        out.push('\n');
        out
    }

    /// `name,n,value,verdict,detail`; remaining fields go to `detail` as
    /// `key=value` pairs joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,n,value,verdict,detail\n");
        for e in &self.results {
            let get = |k: &str| e.0.get(k).map(render).unwrap_or_default();
            let detail: Vec<String> = e
                .0
                .iter()
                .filter(|(k, _)| !matches!(k.as_str(), "name" | "n" | "value" | "verdict"))
                .map(|(k, v)| format!("{k}={}", render(v)))
                .collect();
            let row = [get("name"), get("n"), get("value"), get("verdict"), detail.join(";")];
            out.push_str(&row.map(|f| csv_field(&f)).join(","));
            out.push('\n');
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
