//! Rendering of command results as JSON, CSV or plain text.

use clap::ValueEnum;
use num_traits::ToPrimitive;
use pzf_core::prob::format_rational;
use pzf_core::{Rational, VertexSet};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "pzf/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// An exact rational as `{"exact": "p/q", "decimal": x}`.
pub fn rational_value(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "decimal": r.to_f64().unwrap_or(f64::NAN) })
}

pub fn set_value(s: &VertexSet) -> Value {
    Value::from(s.to_vec())
}

/// Renders one or more result rows for `command`.
pub fn render(format: Format, command: &str, rows: &[Map<String, Value>]) -> String {
    match format {
        Format::Json => {
            let mut top = Map::new();
            top.insert("schema".into(), SCHEMA.into());
            top.insert("command".into(), command.into());
            match rows {
                [one] => top.extend(one.clone()),
                many => {
                    top.insert("rows".into(), Value::Array(many.iter().cloned().map(Value::Object).collect()));
                }
            }
            serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize") + "\n"
        }
        Format::Csv => csv(rows),
        Format::Text => rows.iter().map(|r| text(r, 0)).collect::<Vec<_>>().join("\n"),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(" ")));
        }
        Value::Array(items) => out.push((prefix.to_string(), format!("{} items", items.len()))),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv(rows: &[Map<String, Value>]) -> String {
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            flatten("", &Value::Object(r.clone()), &mut out);
            out
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut out = header.iter().map(|h| quote(h)).collect::<Vec<_>>().join(",") + "\n";
    for row in &flat {
        let line: Vec<String> = header
            .iter()
            .map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| quote(v)).unwrap_or_default())
            .collect();
        out += &(line.join(",") + "\n");
    }
    out
}

fn text(row: &Map<String, Value>, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut out = String::new();
    for (k, v) in row {
        match v {
            Value::Object(m) if m.len() == 2 && m.contains_key("exact") && m.contains_key("decimal") => {
                out += &format!("{pad}{k}: {} ≈ {}\n", scalar(&m["exact"]), scalar(&m["decimal"]));
            }
            Value::Object(m) => {
                out += &format!("{pad}{k}:\n{}", text(m, indent + 2));
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                out += &format!("{pad}{k}: {} entries\n", items.len());
                for item in items {
                    if let Value::Object(m) = item {
                        out += &format!("{pad}  -\n{}", text(m, indent + 4));
                    }
                }
            }
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar).collect();
                out += &format!("{pad}{k}: [{}]\n", joined.join(", "));
            }
            other => out += &format!("{pad}{k}: {}\n", scalar(other)),
        }
    }
    out
}
