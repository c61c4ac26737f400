use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use tugame::rational::{format_rational, format_vector};
use tugame::{Coalition, Rational};

/// Output of one command: human-readable lines plus the same results as
/// structured JSON.
pub struct Report {
    command: &'static str,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    diagnostics: Vec<String>,
    lines: Vec<String>,
    pub nonconverged: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Map::new(),
            results: Map::new(),
            diagnostics: Vec::new(),
            lines: Vec::new(),
            nonconverged: false,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    /// Records the SHA-256 of the canonical game text.
    pub fn game_digest(&mut self, canonical: &str) {
        let digest = Sha256::digest(canonical.as_bytes());
        self.input("game_sha256", Value::String(hex::encode(digest)));
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn diagnostic(&mut self, text: impl Into<String>) {
        let text = text.into();
        self.lines.push(format!("note: {text}"));
        self.diagnostics.push(text);
    }

    pub fn text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    pub fn json(&self, elapsed: Duration) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "timing_ms": elapsed.as_secs_f64() * 1000.0,
        })
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub fn matrix(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| vector(r)).collect())
}

pub fn coalition(s: Coalition) -> Value {
    Value::String(s.to_string())
}

pub fn coalitions(list: &[Coalition]) -> Value {
    Value::Array(list.iter().map(|&s| coalition(s)).collect())
}

pub fn show_coalitions(list: &[Coalition]) -> String {
    let parts: Vec<String> = list.iter().map(ToString::to_string).collect();
    parts.join(" ")
}

pub fn show_vector(xs: &[Rational]) -> String {
    format_vector(xs)
}

pub fn show_matrix(rows: &[Vec<Rational>], indent: &str) -> Vec<String> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .map(|r| {
            let padded: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("{indent}[{}]", padded.join(" "))
        })
        .collect()
}
