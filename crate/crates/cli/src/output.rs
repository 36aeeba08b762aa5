use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::OutputFormat;
use crate::error::{CliError, Result};
use crate::run::Report;

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Rows of already formatted cells under fixed column names.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 cells")
    }
}

/// Path of the metadata file written next to a CSV output.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the report to `output` or stdout. CSV files get a `.meta.json`
/// sidecar holding the envelope without its result.
pub fn write_report(report: &Report, format: OutputFormat, output: Option<&Path>) -> Result<()> {
    let body = match format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report.envelope).expect("JSON envelope");
            text.push('\n');
            text
        }
        OutputFormat::Csv => report.table.to_csv(),
    };
    let Some(path) = output else {
        return io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    fs::write(path, body).map_err(|e| CliError::io(path, e))?;
    if format == OutputFormat::Csv {
        let mut meta = serde_json::to_value(&report.envelope).expect("JSON envelope");
        meta["result"] = Value::Null;
        meta["columns"] = serde_json::to_value(&report.table.columns).expect("column names");
        let sidecar = sidecar_path(path);
        let mut text = serde_json::to_string_pretty(&meta).expect("JSON metadata");
        text.push('\n');
        fs::write(&sidecar, text).map_err(|e| CliError::io(sidecar, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0, 1e-300, 0.22270975817241914, 1.0 / 3.0, 19.0] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(0.05), "0.05");
        assert_eq!(num(19.0), "19.0");
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1.0".into(), "x,y".into()]);
        assert_eq!(t.to_csv(), "a,b\n1.0,\"x,y\"\n");
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(
            sidecar_path(Path::new("out/power.csv")),
            PathBuf::from("out/power.csv.meta.json")
        );
    }
}
