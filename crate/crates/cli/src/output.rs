//! Column tables written as CSV (with `#` metadata lines) or JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::OutputFormat;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub stem: String,
    pub meta: Vec<(String, String)>,
    /// Column headers are `name:unit`.
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    pub fn new(stem: impl Into<String>) -> Self {
        Self {
            stem: stem.into(),
            meta: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn column(&mut self, name: &str, unit: &str, values: Vec<f64>) -> &mut Self {
        self.columns.push((format!("{name}:{unit}"), values));
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    pub fn column_values(&self, header: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.0 == header)
            .map(|c| c.1.as_slice())
    }

    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<PathBuf, CliError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let path = dir.join(format!("{}.{format}", self.stem));
        let mut out = BufWriter::new(File::create(&path).map_err(io(&path))?);
        match format {
            OutputFormat::Csv => self.write_csv(&mut out).map_err(io(&path))?,
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())
                    .map_err(|e| io(&path)(e.into()))?;
                out.write_all(b"\n").map_err(io(&path))?;
            }
        }
        out.flush().map_err(io(&path))?;
        Ok(path)
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.0.as_str()))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| format!("{:e}", c.1[i])))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let columns: Map<String, Value> = self
            .columns
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.clone())))
            .collect();
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("columns".into(), Value::Object(columns));
        Value::Object(root)
    }
}

/// Metadata rendering of a list of numbers.
pub fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:e}"))
        .collect::<Vec<_>>()
        .join(" ")
}
