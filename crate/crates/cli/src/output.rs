//! Ordered, byte-deterministic CSV and JSON writers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;
use crate::CliError;

/// Fixed 17-significant-digit float formatting.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", format_float(*v));
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct WithData<'a, T: Serialize> {
    #[serde(flatten)]
    doc: &'a T,
    columns: &'a [&'a str],
    rows: &'a [Vec<f64>],
}

pub struct Sink {
    out: Option<PathBuf>,
    format: Format,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, format: Format) -> Self {
        Self { out, format }
    }

    fn emit(&self, path: Option<&Path>, text: &str) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    /// Tabular data plus its metadata document.
    ///
    /// CSV: the table goes to `--out` (or stdout) and, when `--out` is set,
    /// the document to a `.json` sidecar next to it. JSON: one object holding
    /// the document, `columns` and `rows`.
    pub fn table<T: Serialize>(&self, header: &[&str], rows: &[Vec<f64>], doc: &T) -> Result<(), CliError> {
        match self.format {
            Format::Csv => {
                self.emit(self.out.as_deref(), &csv_table(header, rows))?;
                if let Some(out) = &self.out {
                    let sidecar = sidecar_path(out);
                    self.emit(Some(&sidecar), &to_json(doc)?)?;
                }
                Ok(())
            }
            Format::Json => {
                let doc = WithData {
                    doc,
                    columns: header,
                    rows,
                };
                self.emit(self.out.as_deref(), &to_json(&doc)?)
            }
        }
    }

    /// A single JSON report, regardless of `--format`.
    pub fn report<T: Serialize>(&self, doc: &T) -> Result<(), CliError> {
        self.emit(self.out.as_deref(), &to_json(doc)?)
    }
}

/// `run.csv` → `run.json`; a `.json` data file gets `run.sidecar.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("sidecar.json")
    } else {
        out.with_extension("json")
    }
}

fn to_json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        let v = 0.1234567890123456_f64;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_layout() {
        let t = csv_table(&["a", "b"], &[vec![1.0, -2.0]]);
        assert_eq!(t, "a,b\n1.0000000000000000e0,-2.0000000000000000e0\n");
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("x/run.csv")), PathBuf::from("x/run.json"));
        assert_eq!(sidecar_path(Path::new("run.json")), PathBuf::from("run.sidecar.json"));
    }
}
