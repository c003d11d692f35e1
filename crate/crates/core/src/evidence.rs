//! Rule-based relevant-cell selection.
//!
//! An Entailed verdict marks every cell relevant. Otherwise the statement's
//! word bag (its normalized tokens) is matched against normalized cell
//! tokens, where the header rows hold column labels and the first column of
//! the body holds row labels:
//!
//! 1. a bag word in a header cell of column `c` marks every body cell of `c`;
//! 2. a bag word in the first-column cell of body row `r` marks all of row `r`;
//! 3. the same bag word in a header cell of `c` and the first-column cell of
//!    body row `r` marks cell `(r, c)`;
//! 4. a bag word in any cell marks that cell.
//!
//! A cell is relevant when at least one rule fires on it.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::corpus::{Label, Statement, TableDocument};
use crate::textnorm::{normalize, AbbrevTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvidenceError {
    #[error("Task B excludes unknown statements")]
    UnknownLabel,
    #[error("run lengths cover {got} cells, expected {expected}")]
    RunLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    AllEntailed,
    HeaderColumn,
    FirstColumnRow,
    HeaderAndFirstColumn,
    CellMatch,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::AllEntailed => "ALL-ENTAILED",
            Rule::HeaderColumn => "1",
            Rule::FirstColumnRow => "2",
            Rule::HeaderAndFirstColumn => "3",
            Rule::CellMatch => "4",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Relevant/irrelevant verdict for every cell of one table and statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceMap {
    pub table_id: String,
    pub stmt_id: String,
    rows: usize,
    cols: usize,
    verdicts: Vec<bool>,
}

impl EvidenceMap {
    pub fn empty(
        table_id: impl Into<String>,
        stmt_id: impl Into<String>,
        rows: usize,
        cols: usize,
    ) -> Self {
        EvidenceMap {
            table_id: table_id.into(),
            stmt_id: stmt_id.into(),
            rows,
            cols,
            verdicts: vec![false; rows * cols],
        }
    }

    /// Builds a map from relevant cells; out-of-grid cells are ignored.
    pub fn from_cells(
        table_id: impl Into<String>,
        stmt_id: impl Into<String>,
        rows: usize,
        cols: usize,
        cells: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut map = EvidenceMap::empty(table_id, stmt_id, rows, cols);
        for (r, c) in cells {
            if r < rows && c < cols {
                map.verdicts[r * cols + c] = true;
            }
        }
        map
    }

    /// Decodes alternating run lengths that start with an irrelevant run.
    pub fn from_runs(
        table_id: impl Into<String>,
        stmt_id: impl Into<String>,
        rows: usize,
        cols: usize,
        runs: &[usize],
    ) -> Result<Self, EvidenceError> {
        let expected = rows * cols;
        let got = runs
            .iter()
            .try_fold(0usize, |a, &r| a.checked_add(r))
            .unwrap_or(usize::MAX);
        if got != expected {
            return Err(EvidenceError::RunLength { expected, got });
        }
        let mut verdicts = Vec::with_capacity(expected);
        for (i, &len) in runs.iter().enumerate() {
            verdicts.extend(core::iter::repeat_n(i % 2 == 1, len));
        }
        Ok(EvidenceMap {
            table_id: table_id.into(),
            stmt_id: stmt_id.into(),
            rows,
            cols,
            verdicts,
        })
    }

    /// Alternating run lengths over the row-major verdicts, starting with an
    /// irrelevant run (possibly of length 0).
    pub fn to_runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0;
        for &v in &self.verdicts {
            if v == current {
                len += 1;
            } else {
                runs.push(len);
                current = v;
                len = 1;
            }
        }
        if len > 0 || runs.is_empty() {
            runs.push(len);
        }
        runs
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_relevant(&self, row: usize, col: usize) -> bool {
        row < self.rows && col < self.cols && self.verdicts[row * self.cols + col]
    }

    pub fn verdicts(&self) -> &[bool] {
        &self.verdicts
    }

    pub fn relevant_cells(&self) -> BTreeSet<(usize, usize)> {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| (i / self.cols, i % self.cols))
            .collect()
    }
}

/// Rules that fired on each cell, row-major, each list sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTrace {
    rows: usize,
    cols: usize,
    fired: Vec<Vec<Rule>>,
}

impl RuleTrace {
    fn new(rows: usize, cols: usize) -> Self {
        RuleTrace {
            rows,
            cols,
            fired: vec![Vec::new(); rows * cols],
        }
    }

    fn fire(&mut self, row: usize, col: usize, rule: Rule) {
        let list = &mut self.fired[row * self.cols + col];
        if let Err(pos) = list.binary_search(&rule) {
            list.insert(pos, rule);
        }
    }

    pub fn rules_at(&self, row: usize, col: usize) -> &[Rule] {
        &self.fired[row * self.cols + col]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Cells on which `rule` fired.
    pub fn cells_with(&self, rule: Rule) -> BTreeSet<(usize, usize)> {
        self.fired
            .iter()
            .enumerate()
            .filter(|(_, l)| l.contains(&rule))
            .map(|(i, _)| (i / self.cols, i % self.cols))
            .collect()
    }
}

pub fn find_evidence(
    statement: &Statement,
    table: &TableDocument,
    task_a_label: Label,
    abbrevs: &AbbrevTable,
) -> Result<(EvidenceMap, RuleTrace), EvidenceError> {
    let (rows, cols) = (table.row_count(), table.col_count());
    let mut trace = RuleTrace::new(rows, cols);
    match task_a_label {
        Label::Unknown => return Err(EvidenceError::UnknownLabel),
        Label::Entailed => {
            for r in 0..rows {
                for c in 0..cols {
                    trace.fire(r, c, Rule::AllEntailed);
                }
            }
        }
        Label::Refuted => {
            let bag_tokens = normalize(&statement.text, abbrevs);
            let bag = bag_tokens.to_bag();
            // Bag words present in each cell.
            let matched: Vec<BTreeSet<&str>> = table
                .cells()
                .iter()
                .map(|cell| {
                    normalize(&cell.text, abbrevs)
                        .iter()
                        .filter_map(|t| bag.get(t.as_str()).copied())
                        .collect()
                })
                .collect();
            let at = |r: usize, c: usize| &matched[r * cols + c];
            let header = 0..table.header_rows();

            let mut header_words: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); cols];
            for r in header.clone() {
                for (c, words) in header_words.iter_mut().enumerate() {
                    words.extend(at(r, c).iter().copied());
                }
            }
            for (c, words) in header_words.iter().enumerate() {
                if !words.is_empty() {
                    for r in table.body_rows() {
                        trace.fire(r, c, Rule::HeaderColumn);
                    }
                }
            }
            if cols > 0 {
                for r in table.body_rows() {
                    let labels = at(r, 0);
                    if labels.is_empty() {
                        continue;
                    }
                    for (c, words) in header_words.iter().enumerate() {
                        trace.fire(r, c, Rule::FirstColumnRow);
                        if !labels.is_disjoint(words) {
                            trace.fire(r, c, Rule::HeaderAndFirstColumn);
                        }
                    }
                }
            }
            for r in 0..rows {
                for c in 0..cols {
                    if !at(r, c).is_empty() {
                        trace.fire(r, c, Rule::CellMatch);
                    }
                }
            }
        }
    }
    let verdicts = trace.fired.iter().map(|l| !l.is_empty()).collect();
    let map = EvidenceMap {
        table_id: table.table_id().into(),
        stmt_id: statement.stmt_id.clone(),
        rows,
        cols,
        verdicts,
    };
    Ok((map, trace))
}
