use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::args::Format;

/// A rendered command result: the JSON document plus a flat view for CSV and
/// tables.
pub struct Document {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Document {
    pub fn new(json: &impl Serialize, header: &[&str]) -> serde_json::Result<Self> {
        Ok(Document {
            json: round_value(serde_json::to_value(json)?),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        })
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format, color: bool) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for line in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Table => self.table(color),
        }
    }

    fn table(&self, color: bool) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut s = String::new();
        let line = |s: &mut String, cells: &[String], paint: bool| {
            let mut parts = Vec::with_capacity(cells.len());
            for (c, w) in cells.iter().zip(&widths) {
                let pad = " ".repeat(w - c.chars().count());
                let shown = match (paint, c.as_str()) {
                    (true, "PASS") => format!("\x1b[32m{c}\x1b[0m"),
                    (true, "FAIL") => format!("\x1b[31m{c}\x1b[0m"),
                    _ => c.clone(),
                };
                parts.push(format!("{shown}{pad}"));
            }
            let _ = writeln!(s, "{}", parts.join("  ").trim_end());
        };
        line(&mut s, &self.header, false);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(&mut s, &rule, false);
        for r in &self.rows {
            line(&mut s, r, color);
        }
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of [`round12`], switching to exponent notation outside
/// `[1e-4, 1e12)`.
pub fn num(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 || (1e-4..1e12).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}
