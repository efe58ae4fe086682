//! Output modes. Human and CSV output are both derived from the same JSON
//! value, so every mode reports the same numbers.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Human,
    Json,
    Csv,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => n.as_f64().map(|f| f.to_string()).unwrap_or_default(),
        },
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

/// `(dotted.key, value)` for every leaf.
pub fn leaves(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    flatten("", v, &mut out);
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a single record.
pub fn record<T: Serialize>(mode: OutputMode, value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    match mode {
        OutputMode::Json => serde_json::to_string_pretty(&v).expect("reports serialize") + "\n",
        OutputMode::Human => {
            let rows = leaves(&v);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, val)| format!("{k:<width$}  {val}\n")).collect()
        }
        OutputMode::Csv => {
            let rows = leaves(&v);
            let header: Vec<_> = rows.iter().map(|(k, _)| csv_field(k)).collect();
            let values: Vec<_> = rows.iter().map(|(_, v)| csv_field(v)).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
    }
}

/// Renders a list of flat rows as an aligned table for human output.
pub fn table<T: Serialize>(rows: &[T]) -> String {
    let flat: Vec<Vec<(String, String)>> =
        rows.iter().map(|r| leaves(&serde_json::to_value(r).expect("rows serialize"))).collect();
    let Some(first) = flat.first() else {
        return String::new();
    };
    let headers: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
    let widths: Vec<usize> = (0..headers.len())
        .map(|i| flat.iter().map(|r| r[i].1.len()).chain([headers[i].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>| -> String {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n"
    };
    out.push_str(&line(headers.clone()));
    for r in &flat {
        out.push_str(&line(r.iter().map(|(_, v)| v.as_str()).collect()));
    }
    out
}
