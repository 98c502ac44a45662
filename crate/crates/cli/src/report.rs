//! Report rendering: JSON with fixed 17-significant-digit floats, CSV and
//! aligned plain-text tables.

use gpt_compat::json::f17;
use serde_json::Value;
use std::fmt::Write;

/// Output format of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Json,
    /// Comma-separated values.
    Csv,
    /// Aligned plain-text table.
    Table,
}

/// Renders `report` in the requested format. Reports with a top-level
/// `rows` array of objects render as one line per row in CSV and table form;
/// other reports render as `key,value` pairs.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            write_json(&mut out, report, 0);
            out.push('\n');
            out
        }
        Format::Csv => {
            let (header, rows) = tabulate_with(report, cell);
            let mut out = String::new();
            for line in std::iter::once(header).chain(rows) {
                let cells: Vec<String> = line.iter().map(|c| csv_escape(c)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let (header, rows) = tabulate_with(report, short_cell);
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in &rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let mut out = String::new();
            let line = |out: &mut String, cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                out.push_str(padded.join("  ").trim_end());
                out.push('\n');
            };
            line(&mut out, &header);
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            line(&mut out, &rule);
            for r in &rows {
                line(&mut out, r);
            }
            out
        }
    }
}

fn tabulate_with(report: &Value, cell: fn(&Value) -> String) -> (Vec<String>, Vec<Vec<String>>) {
    if let Some(rows) = report.get("rows").and_then(Value::as_array) {
        if let Some(Value::Object(first)) = rows.first() {
            let header: Vec<String> = first.keys().cloned().collect();
            let body = rows
                .iter()
                .map(|r| header.iter().map(|k| r.get(k).map_or_else(String::new, cell)).collect())
                .collect();
            return (header, body);
        }
    }
    let header = vec!["key".to_string(), "value".to_string()];
    let body = match report {
        Value::Object(map) => map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect(),
        other => vec![vec!["value".to_string(), cell(other)]],
    };
    (header, body)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => {
            let mut s = String::new();
            write_compact(&mut s, other);
            s
        }
    }
}

/// Table cells print floats in shortest round-trip form.
fn short_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => n.to_string(),
        other => cell(other),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        f17(n.as_f64().unwrap_or(f64::NAN))
    } else {
        n.to_string()
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_default()
}

fn write_compact(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&string(s)),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_compact(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&string(k));
                out.push(':');
                write_compact(out, x);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        _ => true,
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(a) if !a.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_json(out, x, indent + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            let _ = write!(out, "{}]", "  ".repeat(indent));
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", string(k));
                write_json(out, x, indent + 1);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            let _ = write!(out, "{}}}", "  ".repeat(indent));
        }
        other => write_compact(out, other),
    }
}
