use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "lambda-sieve/1";

/// The frozen column and parameter names, shipped with the crate.
pub const SCHEMA_FILE: &str = include_str!("../schema/lambda-sieve.v1.json");

/// Cells longer than this are shortened in text output only.
const TEXT_CELL_LIMIT: usize = 40;

/// A command's result. Serialises to exactly the JSON envelope; `summary`
/// is printed beside the table, never inside CSV or JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table<R> {
    pub schema: String,
    pub command: String,
    pub params: Map<String, Value>,
    pub rows: Vec<R>,
    #[serde(skip)]
    pub summary: Option<String>,
}

impl<R> Table<R> {
    pub fn new(command: &str, params: Map<String, Value>, rows: Vec<R>) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            params,
            rows,
            summary: None,
        }
    }

    pub fn with_summary(mut self, summary: String) -> Self {
        self.summary = Some(summary);
        self
    }
}

impl<R: DeserializeOwned> Table<R> {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("parsing table JSON")
    }
}

pub fn rows_from_csv<R: DeserializeOwned>(text: &str) -> anyhow::Result<Vec<R>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .context("parsing table CSV")
}

/// Output bytes of one command plus its summary line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub body: String,
    pub summary: Option<String>,
    /// False when the command itself reports failure (verify).
    pub success: bool,
}

fn csv_body<R: Serialize>(header: &[&str], rows: &[R]) -> anyhow::Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(String::from_utf8(
        writer.into_inner().context("flushing CSV")?,
    )?)
}

fn shorten(cell: &str) -> String {
    if cell.len() <= TEXT_CELL_LIMIT || !cell.bytes().all(|b| b.is_ascii_digit()) {
        return cell.to_string();
    }
    format!(
        "{}...{} ({} digits)",
        &cell[..12],
        &cell[cell.len() - 12..],
        cell.len()
    )
}

fn text_body(csv_text: &str) -> anyhow::Result<String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv_text.as_bytes());
    let mut grid: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        grid.push(record?.iter().map(shorten).collect());
    }
    let cols = grid.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

impl<R: Serialize> Table<R> {
    pub fn render(&self, format: Format, header: &[&str]) -> anyhow::Result<Rendered> {
        let body = match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self)?;
                text.push('\n');
                text
            }
            Format::Csv => csv_body(header, &self.rows)?,
            Format::Text => {
                let mut text = text_body(&csv_body(header, &self.rows)?)?;
                if let Some(s) = &self.summary {
                    text.push_str(s);
                    text.push('\n');
                }
                text
            }
        };
        Ok(Rendered {
            body,
            summary: self.summary.clone(),
            success: true,
        })
    }
}

/// Columns for `command` as frozen in the schema file.
pub fn schema_columns(command: &str) -> Vec<String> {
    schema_list(command, "columns")
}

/// Parameter names for `command` as frozen in the schema file.
pub fn schema_params(command: &str) -> Vec<String> {
    schema_list(command, "params")
}

fn schema_list(command: &str, key: &str) -> Vec<String> {
    let schema: Value = serde_json::from_str(SCHEMA_FILE).expect("schema file is valid JSON");
    schema["commands"][command][key]
        .as_array()
        .unwrap_or_else(|| panic!("schema has no {key} for {command}"))
        .iter()
        .map(|v| v.as_str().expect("string entry").to_string())
        .collect()
}
