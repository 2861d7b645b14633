//! Report values and their JSON, CSV and text renderings.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    /// Report field the table renders; the text form prints it only as a table.
    pub key: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(key: &str, headers: &[&str]) -> Self {
        Table { key: key.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// A report: a JSON object (keys sorted on output) plus an optional table
/// used by the CSV and text renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, formula: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), Value::from(SCHEMA));
        fields.insert("command".into(), Value::from(command));
        fields.insert("formula".into(), Value::from(formula));
        Report { fields, table: None }
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.into(), v);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))
                    .map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
            Format::Text => Ok(self.render_text()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers).map_err(io)?;
                for r in &t.rows {
                    w.write_record(r).map_err(io)?;
                }
            }
            None => {
                w.write_record(["key", "value"]).map_err(io)?;
                for (k, v) in &self.fields {
                    w.write_record([k.as_str(), &scalar_text(v)]).map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            if v.is_array() || v.is_object() {
                if self.table.as_ref().is_none_or(|t| &t.key != k) {
                    out.push_str(&format!("{k}: {}\n", serde_json::to_string(v).unwrap_or_default()));
                }
                continue;
            }
            out.push_str(&format!("{k}: {}\n", scalar_text(v)));
        }
        if let Some(t) = &self.table {
            out.push('\n');
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|i| t.rows.iter().map(|r| r[i].len()).chain([t.headers[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                parts.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&t.headers));
            for r in &t.rows {
                out.push_str(&line(r));
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renderings() {
        let mut r = Report::new("demo", "none");
        r.set("count", 2);
        let mut t = Table::new("rows", &["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        r.table = Some(t);
        let json = r.render(Format::Json).unwrap();
        assert!(json.starts_with("{\n  \"command\": \"demo\""));
        assert_eq!(r.render(Format::Csv).unwrap(), "a,b\n1,\"x,y\"\n");
        assert!(r.render(Format::Text).unwrap().contains("count: 2\n"));
    }
}
