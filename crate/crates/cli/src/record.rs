//! Output records and their CSV and JSON encodings.
//!
//! CSV files start with `# key: value` metadata lines (schema and command
//! first), followed by a header row and one row per index. Numbers are
//! written with 17 significant digits so that doubles round-trip exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Schema tag carried by every output file.
pub const SCHEMA: &str = "symroof/1";

/// A named column of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Tabular output of a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema: String,
    pub command: String,
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<Column>,
}

/// On-disk encoding of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl OutputRecord {
    pub fn new(command: impl Into<String>) -> Self {
        OutputRecord {
            schema: SCHEMA.to_string(),
            command: command.into(),
            metadata: BTreeMap::new(),
            columns: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn column(&mut self, name: impl Into<String>, values: Vec<f64>) -> &mut Self {
        self.columns.push(Column {
            name: name.into(),
            values,
        });
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// Checks the schema tag, column lengths and names, and that every value
    /// is finite.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            bail!("unsupported schema `{}`, expected `{SCHEMA}`", self.schema);
        }
        let n = self.rows();
        for c in &self.columns {
            if c.values.len() != n {
                bail!("column `{}` has {} values, expected {n}", c.name, c.values.len());
            }
            if c.name.is_empty() || c.name.contains([',', '\n', '"']) {
                bail!("invalid column name `{}`", c.name);
            }
            if let Some(v) = c.values.iter().find(|v| !v.is_finite()) {
                bail!("column `{}` contains the non-finite value {v}", c.name);
            }
        }
        for (k, v) in &self.metadata {
            if k.contains([':', '\n']) || v.contains('\n') {
                bail!("metadata entry `{k}` cannot be written on one line");
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        writeln!(out, "# schema: {}", self.schema)?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| format!("{:.16e}", c.values[i])))?;
        }
        out.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut schema = None;
        let mut command = None;
        let mut metadata = BTreeMap::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix("# ") {
                Some(meta) => {
                    let (k, v) = meta
                        .split_once(": ")
                        .ok_or_else(|| anyhow!("malformed metadata line `{line}`"))?;
                    match k {
                        "schema" => schema = Some(v.to_string()),
                        "command" => command = Some(v.to_string()),
                        _ => {
                            metadata.insert(k.to_string(), v.to_string());
                        }
                    }
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut values = vec![Vec::new(); names.len()];
        for row in r.records() {
            let row = row?;
            for (col, field) in values.iter_mut().zip(row.iter()) {
                col.push(field.parse::<f64>().with_context(|| format!("invalid number `{field}`"))?);
            }
        }
        let record = OutputRecord {
            schema: schema.ok_or_else(|| anyhow!("missing schema line"))?,
            command: command.ok_or_else(|| anyhow!("missing command line"))?,
            metadata,
            columns: names
                .into_iter()
                .zip(values)
                .map(|(name, values)| Column { name, values })
                .collect(),
        };
        record.validate()?;
        Ok(record)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: OutputRecord = serde_json::from_str(text)?;
        record.validate()?;
        Ok(record)
    }

    pub fn encode(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn decode(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }
}

/// Writes `text` to `path`; failures carry the underlying I/O error.
pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("emit-figure vidal-iso --d 5");
        r.meta("d", 5).meta("note", "a, b and c");
        r.column("b", vec![0.0, 0.1, 1.0 / 3.0]);
        r.column("E1", vec![1.0, 2.0f64.sqrt(), 1e-300]);
        r
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let r = sample();
        let text = r.to_csv().unwrap();
        assert!(text.starts_with("# schema: symroof/1\n# command: "));
        assert_eq!(OutputRecord::from_csv(&text).unwrap(), r);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        assert_eq!(OutputRecord::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn ragged_and_non_finite_columns_are_rejected() {
        let mut r = sample();
        r.column("x", vec![1.0]);
        assert!(r.validate().is_err());
        let mut r = sample();
        r.columns[0].values[0] = f64::NAN;
        assert!(r.to_csv().is_err());
        let mut r = sample();
        r.schema = "other/2".into();
        assert!(r.validate().is_err());
    }
}
