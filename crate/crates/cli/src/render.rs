use serde_json::{Map, Value};

use crate::Format;

/// Result of a subcommand, ready for any of the output encodings.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub value: Value,
    /// Replaces the generic plain rendering when set.
    pub plain: Option<String>,
    /// Marks a completed run whose checks did not all pass.
    pub failed: bool,
}

impl Output {
    pub fn new(value: Value) -> Self {
        Output {
            value,
            plain: None,
            failed: false,
        }
    }
}

pub fn render(out: &Output, format: Format) -> String {
    let mut s = match format {
        Format::Json => serde_json::to_string_pretty(&out.value).expect("values are serialisable"),
        Format::Csv => csv(&out.value),
        Format::Plain => match &out.plain {
            Some(p) => p.trim_end().to_string(),
            None => plain(&out.value),
        },
    };
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

fn csv_field(v: &Value) -> String {
    let s = cell(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn header_of(rows: &[Value]) -> Option<Vec<String>> {
    let first: &Map<String, Value> = rows.first()?.as_object()?;
    Some(first.keys().cloned().collect())
}

fn csv(v: &Value) -> String {
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let header = header_of(rows).expect("rows are objects");
            let mut lines = vec![header.join(",")];
            for r in rows {
                let o = r.as_object().expect("rows are objects");
                lines.push(
                    header
                        .iter()
                        .map(|k| o.get(k).map(csv_field).unwrap_or_default())
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            lines.join("\n")
        }
        Value::Array(items) => {
            let mut lines = vec![String::from("value")];
            lines.extend(items.iter().map(csv_field));
            lines.join("\n")
        }
        Value::Object(o) => {
            let keys: Vec<&String> = o.keys().collect();
            let header = keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(",");
            let row = keys.iter().map(|k| csv_field(&o[*k])).collect::<Vec<_>>().join(",");
            format!("{header}\n{row}")
        }
        other => format!("value\n{}", csv_field(other)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let header = header_of(rows).expect("rows are objects");
            let mut lines = vec![header.join("\t")];
            for r in rows {
                let o = r.as_object().expect("rows are objects");
                lines.push(
                    header
                        .iter()
                        .map(|k| o.get(k).map(cell).unwrap_or_default())
                        .collect::<Vec<_>>()
                        .join("\t"),
                );
            }
            lines.join("\n")
        }
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join("\n"),
        Value::Object(o) => o
            .iter()
            .map(|(k, v)| format!("{k}: {}", cell(v)))
            .collect::<Vec<_>>()
            .join("\n"),
        other => cell(other),
    }
}
