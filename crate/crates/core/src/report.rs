//! Tabular command output as CSV or a single JSON document.
//!
//! CSV: an optional data table (own header) followed by a blank line, then the
//! metric rows under `name,value,halfwidth,replicates,seed`. Non-finite numbers
//! print as `inf`, `-inf` or `nan` in both formats.

use std::io::Write;

use serde_json::{json, Map, Value as Json};

use crate::double_auction::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub value: Value,
    pub halfwidth: Option<f64>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
    pub table_columns: Vec<String>,
    pub table: Vec<Vec<f64>>,
}

fn number_text(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

fn number_json(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else {
        Json::String(number_text(x))
    }
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Num(x) => number_text(*x),
            Value::Int(k) => k.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(x) => number_json(*x),
            Value::Int(k) => json!(k),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
        }
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, name: &str, value: Value) -> &mut Self {
        self.rows.push(Row {
            name: name.into(),
            value,
            halfwidth: None,
            replicates: None,
            seed: None,
        });
        self
    }

    pub fn num(&mut self, name: &str, x: f64) -> &mut Self {
        self.push(name, Value::Num(x))
    }

    pub fn int(&mut self, name: &str, k: u64) -> &mut Self {
        self.push(name, Value::Int(k))
    }

    pub fn text(&mut self, name: &str, s: impl Into<String>) -> &mut Self {
        self.push(name, Value::Text(s.into()))
    }

    pub fn flag(&mut self, name: &str, b: bool) -> &mut Self {
        self.push(name, Value::Bool(b))
    }

    pub fn estimate(&mut self, name: &str, e: &Estimate) -> &mut Self {
        self.rows.push(Row {
            name: name.into(),
            value: Value::Num(e.value),
            halfwidth: Some(e.halfwidth),
            replicates: Some(e.replicates),
            seed: Some(e.seed),
        });
        self
    }

    pub fn with_table(&mut self, columns: &[&str], rows: Vec<Vec<f64>>) -> &mut Self {
        self.table_columns = columns.iter().map(|c| c.to_string()).collect();
        self.table = rows;
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        if !self.table_columns.is_empty() {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&self.table_columns)?;
            for row in &self.table {
                w.write_record(row.iter().map(|x| number_text(*x)))?;
            }
            w.flush()?;
            drop(w);
            writeln!(out)?;
        }
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["name", "value", "halfwidth", "replicates", "seed"])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                r.value.text(),
                r.halfwidth.map(number_text).unwrap_or_default(),
                r.replicates.map(|k| k.to_string()).unwrap_or_default(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Json {
        let mut metrics = Map::new();
        for r in &self.rows {
            let v = if r.halfwidth.is_some() || r.replicates.is_some() {
                json!({
                    "value": r.value.json(),
                    "halfwidth": r.halfwidth.map(number_json),
                    "replicates": r.replicates,
                    "seed": r.seed,
                })
            } else {
                r.value.json()
            };
            metrics.insert(r.name.clone(), v);
        }
        let mut doc = Map::new();
        doc.insert("metrics".into(), Json::Object(metrics));
        if !self.table_columns.is_empty() {
            let rows: Vec<Json> = self
                .table
                .iter()
                .map(|row| Json::Array(row.iter().map(|x| number_json(*x)).collect()))
                .collect();
            doc.insert(
                "table".into(),
                json!({ "columns": self.table_columns, "rows": rows }),
            );
        }
        Json::Object(doc)
    }
}
