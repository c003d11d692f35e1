//! Best-effort importer for TabFact's release layout: a JSON file mapping
//! `<table>.html.csv` to `[[statements], [labels], caption]` plus a directory
//! of `#`-delimited table files whose first line is the header.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use tabfact_core::{Label, Statement, TableDocument};

/// Tables that could not be imported are skipped and returned as messages.
pub struct Imported {
    pub corpus: Vec<TableDocument>,
    pub skipped: Vec<String>,
}

fn parse_entry(file: &str, entry: &Value, csv: &str) -> Result<TableDocument> {
    let parts = entry.as_array().context("entry is not an array")?;
    let texts = parts
        .first()
        .and_then(Value::as_array)
        .context("missing statement list")?;
    let labels = parts
        .get(1)
        .and_then(Value::as_array)
        .context("missing label list")?;
    if texts.len() != labels.len() {
        bail!("{} statements but {} labels", texts.len(), labels.len());
    }
    let caption = parts.get(2).and_then(Value::as_str).unwrap_or_default();
    let mut statements = Vec::new();
    for (i, (text, label)) in texts.iter().zip(labels).enumerate() {
        let text = text.as_str().context("statement is not a string")?;
        if text.trim().is_empty() {
            continue;
        }
        let label = match label.as_i64() {
            Some(1) => Label::Entailed,
            Some(0) => Label::Refuted,
            _ => bail!("label {label} is neither 0 nor 1"),
        };
        statements.push(Statement::new(format!("s{i}"), text, Some(label)));
    }
    let rows: Vec<Vec<String>> = csv
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.split('#').map(str::to_string).collect())
        .collect();
    let id = file.strip_suffix(".html.csv").unwrap_or(file);
    let header_rows = TableDocument::DEFAULT_HEADER_ROWS.min(rows.len());
    Ok(TableDocument::new(
        id,
        id,
        caption,
        "",
        rows,
        header_rows,
        statements,
    )?)
}

pub fn import(statements_json: &Path, tables_dir: &Path) -> Result<Imported> {
    let text = fs::read_to_string(statements_json)
        .with_context(|| statements_json.display().to_string())?;
    let entries: BTreeMap<String, Value> =
        serde_json::from_str(&text).with_context(|| statements_json.display().to_string())?;
    let mut corpus = Vec::new();
    let mut skipped = Vec::new();
    for (file, entry) in &entries {
        let path = tables_dir.join(file);
        let result = fs::read_to_string(&path)
            .with_context(|| path.display().to_string())
            .and_then(|csv| parse_entry(file, entry, &csv));
        match result {
            Ok(doc) => corpus.push(doc),
            Err(e) => skipped.push(format!("{file}: {e:#}")),
        }
    }
    Ok(Imported { corpus, skipped })
}
