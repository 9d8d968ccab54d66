use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub cell: Value,
    pub claim: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    /// The statement the expected value comes from, or "derived oracle".
    pub provenance: String,
    /// Informational values that do not take part in `pass`.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Row {
    pub fn new(cell: Value, claim: impl Into<String>, expected: Value, computed: Value, provenance: impl Into<String>) -> Self {
        let pass = expected == computed;
        Row { cell, claim: claim.into(), expected, computed, pass, provenance: provenance.into(), detail: Value::Null }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn error(cell: Value, claim: impl Into<String>, err: impl ToString) -> Self {
        Row {
            cell,
            claim: claim.into(),
            expected: Value::Null,
            computed: json!({ "error": err.to_string() }),
            pass: false,
            provenance: "error".into(),
            detail: Value::Null,
        }
    }

    pub fn annotate(mut self, key: &str, v: Value) -> Self {
        if self.detail.is_null() {
            self.detail = json!({});
        }
        self.detail[key] = v;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub header: Value,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.rows.len()
    }

    pub fn summary(&self) -> Value {
        json!({
            "record": "summary",
            "total": self.rows.len(),
            "passed": self.passed(),
            "failed": self.rows.len() - self.passed(),
            "pass": self.all_pass(),
        })
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let mut header = self.header.clone();
                header["record"] = json!("header");
                writeln!(out, "{header}")?;
                for row in &self.rows {
                    let mut v = serde_json::to_value(row)?;
                    v["record"] = json!("row");
                    writeln!(out, "{v}")?;
                }
                writeln!(out, "{}", self.summary())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["campaign", "cell", "claim", "expected", "computed", "pass", "provenance", "detail"])?;
                let campaign = self.header["campaign"].as_str().unwrap_or_default().to_string();
                for r in &self.rows {
                    w.write_record([
                        campaign.clone(),
                        r.cell.to_string(),
                        r.claim.clone(),
                        r.expected.to_string(),
                        r.computed.to_string(),
                        r.pass.to_string(),
                        r.provenance.clone(),
                        if r.detail.is_null() { String::new() } else { r.detail.to_string() },
                    ])?;
                }
                w.flush()
            }
        }
    }
}
