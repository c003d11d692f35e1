//! In-memory model of a table corpus and its descriptive statistics.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("table has no id")]
    MissingTableId,
    #[error("unrecognized label `{0}`")]
    UnknownLabel(String),
    #[error("table `{table_id}`: duplicate statement id `{stmt_id}`")]
    DuplicateStatement { table_id: String, stmt_id: String },
    #[error("table `{table_id}`: statement `{stmt_id}` has empty text")]
    EmptyStatement { table_id: String, stmt_id: String },
    #[error("table `{table_id}`: statement `{stmt_id}` references cell ({row}, {col}) outside a {rows}x{cols} grid")]
    EvidenceOutOfBounds {
        table_id: String,
        stmt_id: String,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("table `{table_id}`: statement `{stmt_id}` has an empty evidence version")]
    EmptyEvidenceVersion { table_id: String, stmt_id: String },
    #[error("table `{table_id}`: {header_rows} header rows but only {rows} rows")]
    TooManyHeaderRows {
        table_id: String,
        header_rows: usize,
        rows: usize,
    },
    #[error("duplicate table id `{0}`")]
    DuplicateTable(String),
}

/// Task A verdict. The declaration order is the class order used by every
/// score vector and report: `[Entailed, Refuted, Unknown]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Entailed,
    Refuted,
    Unknown,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailed, Label::Refuted, Label::Unknown];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailed => "entailed",
            Label::Refuted => "refuted",
            Label::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Label::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| CorpusError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    /// Empty text encodes a missing value.
    pub text: String,
}

/// One minimal set of relevant cells, as `(row, col)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvidenceVersion {
    pub relevant_cells: BTreeSet<(usize, usize)>,
}

impl EvidenceVersion {
    pub fn new(cells: impl IntoIterator<Item = (usize, usize)>) -> Self {
        EvidenceVersion {
            relevant_cells: cells.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub stmt_id: String,
    pub text: String,
    pub gold_label: Option<Label>,
    pub gold_evidence: Option<Vec<EvidenceVersion>>,
}

impl Statement {
    pub fn new(
        stmt_id: impl Into<String>,
        text: impl Into<String>,
        gold_label: Option<Label>,
    ) -> Self {
        Statement {
            stmt_id: stmt_id.into(),
            text: text.into(),
            gold_label,
            gold_evidence: None,
        }
    }
}

/// Identifies one statement within a corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatementKey {
    pub table_id: String,
    pub stmt_id: String,
}

impl StatementKey {
    pub fn new(table_id: impl Into<String>, stmt_id: impl Into<String>) -> Self {
        StatementKey {
            table_id: table_id.into(),
            stmt_id: stmt_id.into(),
        }
    }
}

impl fmt::Display for StatementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.table_id, self.stmt_id)
    }
}

/// One parsed table with its statements.
///
/// The grid is always rectangular: ragged input rows are padded on the right
/// with empty cells. The first `header_rows` rows are column headers; the
/// remaining rows are the body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDocument {
    doc_id: String,
    table_id: String,
    caption: String,
    legend: String,
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    header_rows: usize,
    statements: Vec<Statement>,
}

impl TableDocument {
    pub const DEFAULT_HEADER_ROWS: usize = 1;

    pub fn new(
        doc_id: impl Into<String>,
        table_id: impl Into<String>,
        caption: impl Into<String>,
        legend: impl Into<String>,
        rows: Vec<Vec<String>>,
        header_rows: usize,
        statements: Vec<Statement>,
    ) -> Result<Self, CorpusError> {
        let table_id = table_id.into();
        if table_id.is_empty() {
            return Err(CorpusError::MissingTableId);
        }
        let n_rows = rows.len();
        let n_cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        if header_rows > n_rows {
            return Err(CorpusError::TooManyHeaderRows {
                table_id,
                header_rows,
                rows: n_rows,
            });
        }
        let mut cells = Vec::with_capacity(n_rows * n_cols);
        for (r, row) in rows.into_iter().enumerate() {
            let width = row.len();
            cells.extend(row.into_iter().enumerate().map(|(c, text)| Cell {
                row: r,
                col: c,
                text,
            }));
            cells.extend((width..n_cols).map(|c| Cell {
                row: r,
                col: c,
                text: String::new(),
            }));
        }
        let doc = TableDocument {
            doc_id: doc_id.into(),
            table_id,
            caption: caption.into(),
            legend: legend.into(),
            rows: n_rows,
            cols: n_cols,
            cells,
            header_rows,
            statements: Vec::new(),
        };
        doc.with_appended(statements)
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn table_id(&self) -> &str {
        &self.table_id
    }

    pub fn caption(&self) -> &str {
        &self.caption
    }

    pub fn legend(&self) -> &str {
        &self.legend
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn header_rows(&self) -> usize {
        self.header_rows
    }

    /// Grid indices of the body (non-header) rows.
    pub fn body_rows(&self) -> Range<usize> {
        self.header_rows..self.rows
    }

    pub fn body_row_count(&self) -> usize {
        self.rows - self.header_rows
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&Cell> {
        if row < self.rows && col < self.cols {
            Some(&self.cells[row * self.cols + col])
        } else {
            None
        }
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Cell texts as a row-major grid.
    pub fn text_grid(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|c| c.text.clone()).collect())
            .collect()
    }

    /// Cell texts of one row joined by single spaces.
    pub fn row_text(&self, row: usize) -> String {
        let mut out = String::new();
        for (i, cell) in self.row(row).iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&cell.text);
        }
        out
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn statement(&self, stmt_id: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.stmt_id == stmt_id)
    }

    pub fn key(&self, stmt: &Statement) -> StatementKey {
        StatementKey::new(self.table_id.clone(), stmt.stmt_id.clone())
    }

    /// Appends statements after validating them against this table.
    pub fn with_appended(mut self, statements: Vec<Statement>) -> Result<Self, CorpusError> {
        let mut ids: BTreeSet<String> = self.statements.iter().map(|s| s.stmt_id.clone()).collect();
        for s in &statements {
            self.validate_statement(s)?;
            if !ids.insert(s.stmt_id.clone()) {
                return Err(CorpusError::DuplicateStatement {
                    table_id: self.table_id.clone(),
                    stmt_id: s.stmt_id.clone(),
                });
            }
        }
        self.statements.extend(statements);
        Ok(self)
    }

    pub fn with_table_id(mut self, table_id: impl Into<String>) -> Result<Self, CorpusError> {
        let table_id = table_id.into();
        if table_id.is_empty() {
            return Err(CorpusError::MissingTableId);
        }
        self.table_id = table_id;
        Ok(self)
    }

    pub fn with_header_rows(mut self, header_rows: usize) -> Result<Self, CorpusError> {
        if header_rows > self.rows {
            return Err(CorpusError::TooManyHeaderRows {
                table_id: self.table_id,
                header_rows,
                rows: self.rows,
            });
        }
        self.header_rows = header_rows;
        Ok(self)
    }

    fn validate_statement(&self, s: &Statement) -> Result<(), CorpusError> {
        if s.text.is_empty() {
            return Err(CorpusError::EmptyStatement {
                table_id: self.table_id.clone(),
                stmt_id: s.stmt_id.clone(),
            });
        }
        for version in s.gold_evidence.iter().flatten() {
            if version.relevant_cells.is_empty() {
                return Err(CorpusError::EmptyEvidenceVersion {
                    table_id: self.table_id.clone(),
                    stmt_id: s.stmt_id.clone(),
                });
            }
            if let Some(&(row, col)) = version
                .relevant_cells
                .iter()
                .find(|&&(r, c)| r >= self.rows || c >= self.cols)
            {
                return Err(CorpusError::EvidenceOutOfBounds {
                    table_id: self.table_id.clone(),
                    stmt_id: s.stmt_id.clone(),
                    row,
                    col,
                    rows: self.rows,
                    cols: self.cols,
                });
            }
        }
        Ok(())
    }
}

/// Fails on the first table id that occurs twice.
pub fn check_unique_table_ids(corpus: &[TableDocument]) -> Result<(), CorpusError> {
    let mut seen = BTreeSet::new();
    for doc in corpus {
        if !seen.insert(doc.table_id()) {
            return Err(CorpusError::DuplicateTable(doc.table_id().to_string()));
        }
    }
    Ok(())
}

/// Max / min / mean of a count distribution. All zero when empty.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub max: usize,
    pub min: usize,
    pub mean: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = usize>) -> Summary {
        let mut n = 0usize;
        let mut sum = 0u128;
        let mut max = 0usize;
        let mut min = usize::MAX;
        for v in values {
            n += 1;
            sum += v as u128;
            max = max.max(v);
            min = min.min(v);
        }
        if n == 0 {
            return Summary::default();
        }
        Summary {
            max,
            min,
            mean: sum as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusStats {
    pub table_count: usize,
    pub statement_count: usize,
    pub entailed: usize,
    pub refuted: usize,
    pub unknown: usize,
    /// Statements without a gold label.
    pub unlabeled: usize,
    /// Whitespace tokens per statement.
    pub statement_tokens: Summary,
    /// Grid rows per table, header rows included.
    pub table_rows: Summary,
    /// Whitespace tokens per row, cells concatenated with spaces.
    pub row_tokens: Summary,
}

pub fn corpus_stats(corpus: &[TableDocument]) -> CorpusStats {
    let mut stats = CorpusStats {
        table_count: corpus.len(),
        ..CorpusStats::default()
    };
    for s in corpus.iter().flat_map(|d| d.statements()) {
        stats.statement_count += 1;
        match s.gold_label {
            Some(Label::Entailed) => stats.entailed += 1,
            Some(Label::Refuted) => stats.refuted += 1,
            Some(Label::Unknown) => stats.unknown += 1,
            None => stats.unlabeled += 1,
        }
    }
    stats.statement_tokens = Summary::of(
        corpus
            .iter()
            .flat_map(|d| d.statements())
            .map(|s| s.text.split_whitespace().count()),
    );
    stats.table_rows = Summary::of(corpus.iter().map(TableDocument::row_count));
    stats.row_tokens = Summary::of(corpus.iter().flat_map(|d| {
        (0..d.row_count()).map(move |r| {
            d.row(r)
                .iter()
                .map(|c| c.text.split_whitespace().count())
                .sum()
        })
    }));
    stats
}
