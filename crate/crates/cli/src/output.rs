//! CSV and JSON writers. Numbers are written with 17 significant digits
//! so files round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Builds a CSV body from a header and numeric rows.
pub struct Csv {
    body: String,
    width: usize,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let names: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
        Self { body: format!("{}\n", names.join(",")), width: names.len() }
    }

    pub fn row(&mut self, values: impl IntoIterator<Item = f64>) {
        let mut n = 0;
        for (i, v) in values.into_iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            let _ = write!(self.body, "{}", fmt_num(v));
            n += 1;
        }
        debug_assert_eq!(n, self.width);
        self.body.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.body
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, &self.body).map_err(|e| CliError::io(path, e))
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Reads the `time` and `column` columns of a CSV written by [`Csv`].
pub fn read_columns(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::trim)
        .collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Config(format!("{} has no `{name}` column", path.display())))
    };
    let (ti, vi) = (find("time")?, find(column)?);
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize| -> Result<f64, CliError> {
            fields
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Config(format!("{}: malformed row {}", path.display(), k + 2)))
        };
        times.push(get(ti)?);
        values.push(get(vi)?);
    }
    Ok((times, values))
}
