//! Result tables and their CSV / JSON encodings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{to_toml, ExperimentConfig, Format, Param, ECHO_BEGIN, ECHO_END};
use crate::error::CliError;

/// A rectangular numeric table plus the configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    /// File stem, e.g. `trajectory_beta_beta=0.5`.
    pub name: String,
    /// `trajectory`, `thermo` or `steady_state`.
    pub kind: String,
    pub header: Vec<String>,
    /// The first `int_cols` columns hold integers (the step counter).
    pub int_cols: usize,
    pub rows: Vec<Vec<f64>>,
    pub config: ExperimentConfig,
    /// Swept parameter values that identify this table, outer axis first.
    pub point: Vec<(Param, f64)>,
}

impl ResultTable {
    pub fn new(name: String, kind: &str, header: &[&str], config: &ExperimentConfig, point: Vec<(Param, f64)>) -> Self {
        ResultTable {
            name,
            kind: kind.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            int_cols: 0,
            rows: Vec::new(),
            config: config.clone(),
            point,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Rectangular with finite entries.
    pub fn check(&self) -> Result<(), CliError> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(CliError::Numerical(format!("{}: row {i} has {} entries", self.name, row.len())));
            }
            if let Some((k, x)) = row.iter().enumerate().find(|(_, x)| !x.is_finite()) {
                return Err(CliError::Numerical(format!(
                    "{}: non-finite {} = {x} in row {i}",
                    self.name, self.header[k]
                )));
            }
        }
        Ok(())
    }

    fn point_label(&self) -> String {
        self.point.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(" ")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(ECHO_BEGIN);
        s.push('\n');
        for line in to_toml(&self.config).lines() {
            if line.is_empty() {
                s.push_str("#\n");
            } else {
                let _ = writeln!(s, "# {line}");
            }
        }
        s.push_str(ECHO_END);
        s.push('\n');
        let _ = writeln!(s, "# table: {}", self.kind);
        if !self.point.is_empty() {
            let _ = writeln!(s, "# point: {}", self.point_label());
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                if k < self.int_cols {
                    let _ = write!(s, "{}", *x as i64);
                } else {
                    let _ = write!(s, "{x:.16e}");
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        meta.insert("config".into(), serde_json::to_value(&self.config).expect("configuration serialises"));
        meta.insert("table".into(), Value::from(self.kind.clone()));
        let mut point = Map::new();
        for (p, v) in &self.point {
            point.insert(p.name().into(), Value::from(*v));
        }
        meta.insert("point".into(), Value::Object(point));

        let mut cols = Map::new();
        for (k, h) in self.header.iter().enumerate() {
            let values: Vec<Value> = self
                .rows
                .iter()
                .map(|r| if k < self.int_cols { Value::from(r[k] as i64) } else { Value::from(r[k]) })
                .collect();
            cols.insert(h.clone(), Value::Array(values));
        }
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(meta));
        doc.insert("columns".into(), Value::Object(cols));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("finite table serialises");
        s.push('\n');
        s
    }

    pub fn encode(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn file_name(&self, format: Format) -> String {
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        format!("{}.{ext}", self.name)
    }
}

/// Parses the data rows of an emitted CSV table (comment lines skipped).
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().ok_or("missing header")?.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| format!("row {i}: `{f}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != header.len() {
            return Err(format!("row {i} has {} fields, header has {}", row.len(), header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Writes each table to `dir` (created if needed) or, without a directory,
/// to `out` one after another.
pub fn emit(tables: &[ResultTable], format: Format, dir: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    for t in tables {
        t.check()?;
    }
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for t in tables {
                let path = dir.join(t.file_name(format));
                std::fs::write(&path, t.encode(format)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
        }
        None => {
            for t in tables {
                out.write_all(t.encode(format).as_bytes()).map_err(|e| CliError::Io(format!("standard output: {e}")))?;
            }
            out.flush().map_err(|e| CliError::Io(format!("standard output: {e}")))?;
        }
    }
    Ok(())
}
