use std::fs;
use std::path::Path;

use nullprop_core::PValueSample;

use crate::config::InputFormat;
use crate::error::{CliError, Result};

/// Reads p-values from a file. Every value must parse and lie in [0, 1];
/// errors carry the 1-based line number.
pub fn read_pvalues(path: &Path, format: InputFormat, column: &str) -> Result<PValueSample> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let format = match format {
        InputFormat::Auto
            if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv")) =>
        {
            InputFormat::Csv
        }
        InputFormat::Auto => InputFormat::Lines,
        other => other,
    };
    let values = match format {
        InputFormat::Csv => parse_csv(path, &text, column)?,
        _ => parse_lines(path, &text)?,
    };
    if values.is_empty() {
        return Err(CliError::Input {
            path: path.into(),
            line: 0,
            reason: "no p-values found".into(),
        });
    }
    Ok(PValueSample::new(values, path.display().to_string())?)
}

fn parse_value(path: &Path, line: u64, field: &str) -> Result<f64> {
    let bad = |reason: String| CliError::Input {
        path: path.into(),
        line,
        reason,
    };
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| bad(format!("`{}` is not a number", field.trim())))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(bad(format!("p-value {value} is outside [0, 1]")));
    }
    Ok(value)
}

fn parse_lines(path: &Path, text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_value(path, i as u64 + 1, l))
        .collect()
}

fn parse_csv(path: &Path, text: &str, column: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let csv_error = |e: csv::Error| CliError::Input {
        path: path.into(),
        line: e.position().map_or(0, |p| p.line()),
        reason: e.to_string(),
    };
    let headers = reader.headers().map_err(csv_error)?.clone();
    let index = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| CliError::Input {
            path: path.into(),
            line: 1,
            reason: format!("no column named `{column}`"),
        })?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        values.push(parse_value(path, line, record.get(index).unwrap_or(""))?);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn lines_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "p.txt", "0.9\n# comment\n\n0.1\n");
        let sample = read_pvalues(&path, InputFormat::Auto, "pvalue").unwrap();
        assert_eq!(sample.values(), &[0.1, 0.9]);
        assert_eq!(sample.n(), 2);
    }

    #[test]
    fn out_of_range_and_garbage_report_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "p.txt", "0.1\n1.2\n");
        match read_pvalues(&path, InputFormat::Lines, "pvalue") {
            Err(CliError::Input { line, reason, .. }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("outside"));
            }
            other => panic!("expected input error, got {other:?}"),
        }
        let path = write(&dir, "q.txt", "0.1\n0.2\nabc\n");
        assert!(matches!(
            read_pvalues(&path, InputFormat::Lines, "pvalue"),
            Err(CliError::Input { line: 3, .. })
        ));
        let path = write(&dir, "e.txt", "\n# nothing\n");
        assert!(read_pvalues(&path, InputFormat::Lines, "pvalue").is_err());
    }

    #[test]
    fn csv_column() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("id,pvalue\n");
        for i in 0..1000 {
            text.push_str(&format!("g{i},{}\n", (i as f64 + 0.5) / 1000.0));
        }
        let path = write(&dir, "p.csv", &text);
        assert_eq!(
            read_pvalues(&path, InputFormat::Auto, "pvalue")
                .unwrap()
                .n(),
            1000
        );
        assert!(matches!(
            read_pvalues(&path, InputFormat::Csv, "p"),
            Err(CliError::Input { line: 1, .. })
        ));
        let path = write(&dir, "bad.csv", "id,pvalue\na,0.5\nb,-0.1\n");
        assert!(matches!(
            read_pvalues(&path, InputFormat::Csv, "pvalue"),
            Err(CliError::Input { line: 3, .. })
        ));
    }
}
