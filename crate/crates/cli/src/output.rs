//! Writing numeric tables and JSON documents into the output directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use lambda_sta::pulse::fmt_float;
use lambda_sta::sweep::SweepTable;
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

/// Column-major numeric data written as CSV and/or
/// `{"columns": [...], "rows": [[...], ...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }
}

pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(CliError::io(root))?;
        Ok(OutputDir {
            root: root.to_owned(),
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn with_file<F>(&mut self, name: &str, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(CliError::io(&path))?;
        let mut w = BufWriter::new(file);
        body(&mut w)
            .and_then(|_| w.flush())
            .map_err(CliError::io(&path))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.with_file(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }

    /// `<stem>.csv` and/or `<stem>.json`.
    pub fn table(&mut self, stem: &str, table: &Table, format: Format) -> Result<(), CliError> {
        if format.csv() {
            self.with_file(&format!("{stem}.csv"), |w| table.write_csv(w))?;
        }
        if format.json() {
            self.json(&format!("{stem}.json"), table)?;
        }
        Ok(())
    }

    pub fn sweep(
        &mut self,
        stem: &str,
        table: &SweepTable,
        format: Format,
    ) -> Result<(), CliError> {
        if format.csv() {
            self.with_file(&format!("{stem}.csv"), |w| table.write_csv(w))?;
        }
        if format.json() {
            self.json(&format!("{stem}.json"), table)?;
        }
        Ok(())
    }
}
