// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Artifact writing: atomic file creation, deterministic numeric
//! formatting, and a small table abstraction rendered as either CSV or a
//! schema-versioned JSON document.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, Result};

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Formats a float with enough digits to round-trip deterministically.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        // Avoid "-0" artifacts from signed zero.
        "0".to_string()
    } else {
        format!("{v:.12e}")
    }
}

/// Writes `content` to `path` atomically: the bytes land in a temporary
/// sibling first and are renamed into place, so readers never observe a
/// partially written artifact.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::config(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    std::fs::write(&tmp, content)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::config(format!("cannot finalize {}: {e}", path.display()))
    })?;
    Ok(())
}

/// One table cell: text (labels) or a number (formatted per output format).
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
}

pub fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

pub fn cell(v: f64) -> Cell {
    Cell::Num(v)
}

/// A rectangular table accumulated in memory and written atomically as
/// CSV (`header` + one line per row) or JSON
/// (`{"schema":1,"kind":…,"columns":…,"rows":…}`).
pub struct Table {
    kind: &'static str,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(
        kind: &'static str,
        columns: impl IntoIterator<Item = S>,
    ) -> Self {
        Table {
            kind,
            header: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: impl IntoIterator<Item = Cell>) {
        let row: Vec<Cell> = cells.into_iter().collect();
        debug_assert_eq!(row.len(), self.header.len(), "table row width mismatch");
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(s) => s.clone(),
                    Cell::Num(v) => num(*v),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Text(s) => json!(s),
                            Cell::Num(v) => {
                                serde_json::Number::from_f64(*v).map_or(
                                    serde_json::Value::Null,
                                    serde_json::Value::Number,
                                )
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "schema": 1,
            "kind": self.kind,
            "columns": self.header,
            "rows": rows,
        })
    }

    /// Writes `<stem>.csv` or `<stem>.json` under `dir` per `format` and
    /// returns the path written.
    pub fn write(&self, dir: &Path, stem: &str, format: OutputFormat) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        match format {
            OutputFormat::Csv => write_atomic(&path, &self.render_csv())?,
            OutputFormat::Json => write_json(&path, &self.to_json())?,
        }
        Ok(path)
    }
}

/// Serializes `value` as pretty JSON (stable key order comes from the
/// struct definitions) and writes it atomically. Callers embed a
/// `"schema": 1` field in the value itself.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numeric(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_atomic(path, &text)
}
