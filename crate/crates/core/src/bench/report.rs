//! Tabular evaluation report with CSV and markdown emission.

use std::io::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// One report row: combination key columns plus metric values in the
/// report's column order. None renders as "NA".
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub detector: String,
    pub selector: String,
    pub descriptor: String,
    /// Transform kind, pair tag, or aggregate label.
    pub tag: String,
    pub values: Vec<Option<f64>>,
}

/// Fixed-column evaluation report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Metric column names (after the four key columns).
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::Config(format!("unknown report format '{other}'"))),
        }
    }
}

fn cell(v: &Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.2}"),
        None => "NA".to_string(),
    }
}

impl EvalReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("detector,selector,descriptor,tag");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}",
                r.detector, r.selector, r.descriptor, r.tag
            ));
            for v in &r.values {
                out.push(',');
                out.push_str(&cell(v));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut header = vec![
            "detector".to_string(),
            "selector".to_string(),
            "descriptor".to_string(),
            "tag".to_string(),
        ];
        header.extend(self.columns.iter().cloned());
        let mut out = format!("| {} |\n", header.join(" | "));
        out.push_str(&format!(
            "|{}\n",
            " --- |".repeat(header.len())
        ));
        for r in &self.rows {
            let mut cells = vec![
                r.detector.clone(),
                r.selector.clone(),
                r.descriptor.clone(),
                r.tag.clone(),
            ];
            cells.extend(r.values.iter().map(cell));
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }
}

pub fn write_report(report: &EvalReport, format: ReportFormat, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(report.render(format).as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Mean over the defined entries; None when nothing is defined.
pub fn mean_defined(values: &[Option<f64>]) -> Option<f64> {
    let defined: Vec<f64> = values.iter().filter_map(|v| *v).collect();
    if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    }
}
