//! Content snapshots: the body rows of a table that share the most n-grams
//! with a statement.
//!
//! `R` is the median body-row count over a reference corpus. A table with at
//! most `R` body rows is kept whole; a longer one is cut to the `R` rows
//! with the highest [`overlap_rate`] against the statement, ties going to
//! the smaller row index. Header rows are never candidates here; consumers
//! that linearize a table add them back in front of the snapshot rows.

use alloc::string::String;
use alloc::vec::Vec;
use core::num::NonZeroUsize;

use thiserror::Error;

use crate::corpus::{Statement, TableDocument};
use crate::textnorm::{ngram_set, normalize, overlap_rate, AbbrevTable, NgramOrders};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnapshotError {
    #[error("cannot take the median row count of an empty corpus")]
    EmptyCorpus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub table_id: String,
    pub stmt_id: String,
    /// Grid row indices, strictly ascending, all body rows.
    pub row_indices: Vec<usize>,
}

impl Snapshot {
    pub fn k(&self) -> usize {
        self.row_indices.len()
    }
}

/// Lower median of the body-row counts, floored at 1.
pub fn median_row_count(corpus: &[TableDocument]) -> Result<NonZeroUsize, SnapshotError> {
    let mut counts: Vec<usize> = corpus.iter().map(TableDocument::body_row_count).collect();
    if counts.is_empty() {
        return Err(SnapshotError::EmptyCorpus);
    }
    counts.sort_unstable();
    let median = counts[(counts.len() - 1) / 2];
    Ok(NonZeroUsize::new(median).unwrap_or(NonZeroUsize::MIN))
}

/// Overlap rate of the statement against every body row, in row order.
pub fn row_overlaps(
    table: &TableDocument,
    statement: &Statement,
    orders: &NgramOrders,
    abbrevs: &AbbrevTable,
) -> Vec<(usize, f64)> {
    let stmt_tokens = normalize(&statement.text, abbrevs);
    let stmt_grams = ngram_set(&stmt_tokens, orders);
    table
        .body_rows()
        .map(|r| {
            let row_tokens = normalize(&table.row_text(r), abbrevs);
            (
                r,
                overlap_rate(&stmt_grams, &ngram_set(&row_tokens, orders)),
            )
        })
        .collect()
}

pub fn select_snapshot(
    table: &TableDocument,
    statement: &Statement,
    r: NonZeroUsize,
    orders: &NgramOrders,
    abbrevs: &AbbrevTable,
) -> Snapshot {
    let row_indices = if table.body_row_count() <= r.get() {
        table.body_rows().collect()
    } else {
        let mut scored = row_overlaps(table, statement, orders, abbrevs);
        // Stable sort keeps ascending row order among equal rates.
        scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut top: Vec<usize> = scored.into_iter().take(r.get()).map(|(i, _)| i).collect();
        top.sort_unstable();
        top
    };
    Snapshot {
        table_id: table.table_id().into(),
        stmt_id: statement.stmt_id.clone(),
        row_indices,
    }
}
