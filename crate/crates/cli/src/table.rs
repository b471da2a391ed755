use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::grid::fmt_g;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Version, command and the parsed flag set that produced an output.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub program: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub flags: Value,
}

impl Provenance {
    pub fn new(command: &'static str, flags: &impl Serialize) -> Self {
        Provenance {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            flags: serde_json::to_value(flags).expect("flags serialize"),
        }
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write(&self, provenance: &Provenance, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
        let mut sink: Box<dyn Write> = match out {
            Some(path) => Box::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?),
            None => Box::new(io::stdout().lock()),
        };
        match format {
            Format::Csv => self.write_csv(provenance, &mut sink)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut sink, &self.to_json(provenance))?;
                writeln!(sink)?;
            }
        }
        sink.flush()?;
        Ok(())
    }

    fn write_csv(&self, provenance: &Provenance, sink: &mut dyn Write) -> anyhow::Result<()> {
        writeln!(sink, "# {}", serde_json::to_string(provenance)?)?;
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_g(v)))?;
        }
        w.flush()?;
        Ok(())
    }

    fn to_json(&self, provenance: &Provenance) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let record: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, &v)| (c.clone(), number(v)))
                    .collect();
                Value::Object(record)
            })
            .collect();
        json!({ "provenance": provenance, "columns": self.columns, "rows": rows })
    }
}

/// Same 12 significant digits as the CSV; non-finite values become strings.
pub fn number(v: f64) -> Value {
    let s = fmt_g(v);
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => json!(x),
        _ => Value::String(s),
    }
}
