//! Experiment reports: a JSON document plus optional CSV, plot data and
//! extra files, written to an output directory or printed.

use std::fs;
use std::path::Path;

use holonomy_core::{CMatrix, C64};
use serde_json::{json, Value};

use crate::formats::MatrixDoc;
use crate::LabError;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub csv: Option<String>,
    /// Two whitespace-separated columns `x value`.
    pub plot: Option<String>,
    /// Extra files written next to the report.
    pub extra: Vec<(String, String)>,
    /// A verdict of not-member or an unmet tolerance.
    pub failed: bool,
}

impl Report {
    pub fn new(command: &'static str, json: Value) -> Self {
        Report { command, json, csv: None, plot: None, extra: Vec::new(), failed: false }
    }

    pub fn rendered(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("json values always serialize");
        s.push('\n');
        s
    }

    /// Writes `<command>.json` and, when present, `<command>.csv`,
    /// `<command>.dat` and the extra files into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), LabError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{}.json", self.command)), self.rendered())?;
        if let Some(csv) = &self.csv {
            fs::write(dir.join(format!("{}.csv", self.command)), csv)?;
        }
        if let Some(plot) = &self.plot {
            fs::write(dir.join(format!("{}.dat", self.command)), plot)?;
        }
        for (name, body) in &self.extra {
            fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &CMatrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("matrix documents always serialize")
}

/// Two-column plot data.
pub fn plot<I: IntoIterator<Item = (f64, f64)>>(rows: I) -> String {
    rows.into_iter().map(|(x, y)| format!("{x} {y:e}\n")).collect()
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| LabError::op("csv", e))?;
    for r in rows {
        w.write_record(r).map_err(|e| LabError::op("csv", e))?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::op("csv", e))?;
    String::from_utf8(bytes).map_err(|e| LabError::op("csv", e))
}
