//! CSV tables, single-column input and run manifests.

use crate::error::{CliError, Result};
use std::fs;
use std::path::{Path, PathBuf};

/// An in-memory table written as comma-separated text with a header row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let to_err = |e: csv::Error| match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::io(path, source),
            other => CliError::Data(format!("{}: {other:?}", path.display())),
        };
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .map_err(to_err)?;
        writer.write_record(&self.header).map_err(to_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(to_err)?;
        }
        writer.flush().map_err(|e| CliError::io(path, e))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Reads the first column of a CSV file as numbers. A first row that does
/// not parse is taken as a header.
pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::io(path, source),
            other => CliError::Data(format!("{}: {other:?}", path.display())),
        })?;
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let field = record.get(0).unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ if line == 0 => continue,
            _ => {
                return Err(CliError::Data(format!(
                    "{}: line {}: cannot read {field:?} as a finite number",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    Ok(values)
}

/// Flag set of a run, recorded in `manifest.txt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub subcommand: String,
    pub flags: Vec<(String, String)>,
}

pub const MANIFEST_FILE: &str = "manifest.txt";

impl Manifest {
    pub fn new(subcommand: &str) -> Self {
        Manifest {
            subcommand: subcommand.to_string(),
            flags: Vec::new(),
        }
    }

    pub fn flag(mut self, name: &str, value: impl ToString) -> Self {
        self.flags.push((name.to_string(), value.to_string()));
        self
    }

    /// Arguments that repeat the run, excluding `--out`.
    pub fn args(&self) -> Vec<String> {
        std::iter::once(self.subcommand.clone())
            .chain(self.flags.iter().map(|(k, v)| {
                if v.is_empty() {
                    format!("--{k}")
                } else {
                    format!("--{k}={v}")
                }
            }))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# mcmc-confidence run manifest\n");
        out.push_str(&format!("tool=mcmc-confidence {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("subcommand={}\n", self.subcommand));
        for (k, v) in &self.flags {
            let v = if v.is_empty() { "true" } else { v };
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&format!("args={}\n", self.args().join(" ")));
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, self.render()).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Argument list stored in a manifest file's `args=` line.
    pub fn read_args(path: &Path) -> Result<Vec<String>> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        text.lines()
            .find_map(|l| l.strip_prefix("args="))
            .map(|a| a.split_whitespace().map(str::to_string).collect())
            .ok_or_else(|| CliError::Data(format!("{}: no args= line", path.display())))
    }
}
