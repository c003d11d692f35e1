//! Classifier inputs and outputs: linearized model input, per-model score
//! vectors and a deterministic lexical baseline.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::corpus::{Label, Statement, StatementKey, TableDocument};
use crate::snapshot::Snapshot;
use crate::textnorm::{
    ngram_set, normalize, normalize_surface, overlap_rate, tokenize, AbbrevTable, NgramOrders,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("snapshot for {snap_table}/{snap_stmt} used with {table}/{stmt}")]
    SnapshotMismatch {
        snap_table: String,
        snap_stmt: String,
        table: String,
        stmt: String,
    },
    #[error("snapshot row {row} is not a body row of table `{table}`")]
    BadSnapshotRow { table: String, row: usize },
    #[error("snapshot rows of table `{0}` are not strictly ascending")]
    UnsortedSnapshot(String),
    #[error("model name is empty")]
    EmptyModelName,
    #[error("expected 3 scores, got {0}")]
    ScoreCount(usize),
    #[error("score {index} of model `{model}` is not finite")]
    NonFinite { model: String, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearToken {
    Cls,
    /// Separates the statement from the table.
    Sep,
    /// Separates consecutive table cells.
    CellSep,
    Word(String),
}

impl fmt::Display for LinearToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearToken::Cls => f.write_str("[CLS]"),
            LinearToken::Sep => f.write_str("[SEP]"),
            LinearToken::CellSep => f.write_str("[SEP-CELL]"),
            LinearToken::Word(w) => f.write_str(w),
        }
    }
}

/// `[CLS] statement [SEP] header rows and snapshot rows`, cells separated by
/// [`LinearToken::CellSep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedInput(Vec<LinearToken>);

impl LinearizedInput {
    pub fn tokens(&self) -> &[LinearToken] {
        &self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

pub(crate) fn check_snapshot(
    statement: &Statement,
    table: &TableDocument,
    snap: &Snapshot,
) -> Result<(), ClassifyError> {
    if snap.table_id != table.table_id() || snap.stmt_id != statement.stmt_id {
        return Err(ClassifyError::SnapshotMismatch {
            snap_table: snap.table_id.clone(),
            snap_stmt: snap.stmt_id.clone(),
            table: table.table_id().into(),
            stmt: statement.stmt_id.clone(),
        });
    }
    let body = table.body_rows();
    if let Some(&row) = snap.row_indices.iter().find(|r| !body.contains(r)) {
        return Err(ClassifyError::BadSnapshotRow {
            table: table.table_id().into(),
            row,
        });
    }
    if snap.row_indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ClassifyError::UnsortedSnapshot(table.table_id().into()));
    }
    Ok(())
}

/// Surface tokens (expanded, not stemmed) in model-input order.
pub fn linearize(
    statement: &Statement,
    table: &TableDocument,
    snap: &Snapshot,
    abbrevs: &AbbrevTable,
) -> Result<LinearizedInput, ClassifyError> {
    check_snapshot(statement, table, snap)?;
    let words = |text: &str| {
        normalize_surface(text, abbrevs)
            .into_inner()
            .into_iter()
            .map(LinearToken::Word)
    };
    let mut out = Vec::new();
    out.push(LinearToken::Cls);
    out.extend(words(&statement.text));
    out.push(LinearToken::Sep);
    let rows = (0..table.header_rows()).chain(snap.row_indices.iter().copied());
    let mut first = true;
    for r in rows {
        for cell in table.row(r) {
            if !first {
                out.push(LinearToken::CellSep);
            }
            first = false;
            out.extend(words(&cell.text));
        }
    }
    Ok(LinearizedInput(out))
}

/// One classifier's scores for one statement, in `[Entailed, Refuted, Unknown]`
/// order. Scores need not be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    model_name: String,
    key: StatementKey,
    scores: [f64; 3],
}

impl ScoreVector {
    pub fn new(
        model_name: impl Into<String>,
        key: StatementKey,
        scores: &[f64],
    ) -> Result<Self, ClassifyError> {
        let model_name = model_name.into();
        if model_name.is_empty() {
            return Err(ClassifyError::EmptyModelName);
        }
        let scores: [f64; 3] = scores
            .try_into()
            .map_err(|_| ClassifyError::ScoreCount(scores.len()))?;
        if let Some(index) = scores.iter().position(|s| !s.is_finite()) {
            return Err(ClassifyError::NonFinite {
                model: model_name,
                index,
            });
        }
        Ok(ScoreVector {
            model_name,
            key,
            scores,
        })
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    pub fn key(&self) -> &StatementKey {
        &self.key
    }

    pub fn scores(&self) -> [f64; 3] {
        self.scores
    }

    pub fn score(&self, label: Label) -> f64 {
        self.scores[label.index()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub orders: NgramOrders,
    /// Surface words that mark a statement as negated.
    pub negators: Vec<String>,
    /// Refuted score multiplier for negated statements.
    pub negated_factor: f64,
    /// Refuted score multiplier otherwise.
    pub plain_factor: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            orders: NgramOrders::default(),
            negators: ["no", "not", "never", "fewer", "less"]
                .into_iter()
                .map(String::from)
                .collect(),
            negated_factor: 1.25,
            plain_factor: 0.75,
        }
    }
}

/// Scores `(o, o * f, 1 - o)` where `o` is the best overlap rate between the
/// statement and a snapshot row and `f` is the negated or plain factor.
///
/// Entailed and Unknown lie in `[0, 1]`; Refuted in `[0, max(factors)]`.
/// Negators are matched on lowercase surface tokens, before abbreviation
/// expansion.
pub fn lexical_baseline(
    model_name: &str,
    statement: &Statement,
    table: &TableDocument,
    snap: &Snapshot,
    config: &BaselineConfig,
    abbrevs: &AbbrevTable,
) -> Result<ScoreVector, ClassifyError> {
    check_snapshot(statement, table, snap)?;
    let stmt_tokens = normalize(&statement.text, abbrevs);
    let stmt_grams = ngram_set(&stmt_tokens, &config.orders);
    let best = snap
        .row_indices
        .iter()
        .map(|&r| {
            let row_tokens = normalize(&table.row_text(r), abbrevs);
            overlap_rate(&stmt_grams, &ngram_set(&row_tokens, &config.orders))
        })
        .fold(0.0, f64::max);
    let negated = tokenize(&statement.text)
        .iter()
        .any(|t| config.negators.iter().any(|n| n == t));
    let factor = if negated {
        config.negated_factor
    } else {
        config.plain_factor
    };
    ScoreVector::new(
        model_name,
        table.key(statement),
        &[best, best * factor, 1.0 - best],
    )
}
