//! Task A (3-way and 2-way) and Task B (relevant-cell) scorers.
//!
//! Every protocol scores each table on its own and then averages the table
//! scores; tables with nothing to score are left out of the average, and an
//! average over no tables is 0. Sums run in id order, so reordering tables
//! or statements never changes a score.
//!
//! Zero denominators: precision (recall) is 1 when both the predicted and the
//! gold sets are empty and 0 when only its own denominator is empty; F1 is 0
//! when precision and recall are both 0.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::corpus::{Label, StatementKey, TableDocument};
use crate::evidence::EvidenceMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no prediction for statement {0}")]
    MissingPrediction(StatementKey),
    #[error("prediction for {key} is {got_rows}x{got_cols}, table is {rows}x{cols}")]
    ShapeMismatch {
        key: StatementKey,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
}

/// How per-class counts are combined within one table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Mean F1 over the classes present in gold or predictions.
    #[default]
    Macro,
    /// F1 of the pooled counts of the present classes.
    Micro,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn prf(tp: usize, fp: usize, fn_: usize) -> Prf {
    let predicted = tp + fp;
    let actual = tp + fn_;
    let ratio = |num: usize, den: usize, other: usize| match (den, other) {
        (0, 0) => 1.0,
        (0, _) => 0.0,
        _ => num as f64 / den as f64,
    };
    let precision = ratio(tp, predicted, actual);
    let recall = ratio(tp, actual, predicted);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf {
        precision,
        recall,
        f1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableScore {
    pub table_id: String,
    pub score: f64,
    /// Statements that contributed to the score.
    pub statements: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolScore {
    pub per_table: Vec<TableScore>,
    pub overall: f64,
}

fn mean_in_key_order<'a>(items: impl Iterator<Item = (&'a str, f64)>) -> f64 {
    let sorted: BTreeMap<&str, f64> = items.collect();
    if sorted.is_empty() {
        0.0
    } else {
        sorted.values().sum::<f64>() / sorted.len() as f64
    }
}

fn overall(per_table: Vec<TableScore>) -> ProtocolScore {
    let overall = mean_in_key_order(per_table.iter().map(|t| (t.table_id.as_str(), t.score)));
    ProtocolScore { per_table, overall }
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    tp: usize,
    fp: usize,
    fn_: usize,
}

impl Counts {
    fn present(&self) -> bool {
        self.tp + self.fp + self.fn_ > 0
    }
}

fn combine(counts: &[Counts], averaging: Averaging) -> f64 {
    let present: Vec<&Counts> = counts.iter().filter(|c| c.present()).collect();
    match averaging {
        Averaging::Macro => {
            if present.is_empty() {
                return 0.0;
            }
            present
                .iter()
                .map(|c| prf(c.tp, c.fp, c.fn_).f1)
                .sum::<f64>()
                / present.len() as f64
        }
        Averaging::Micro => {
            let (tp, fp, fn_) = present
                .iter()
                .fold((0, 0, 0), |(a, b, c), k| (a + k.tp, b + k.fp, c + k.fn_));
            prf(tp, fp, fn_).f1
        }
    }
}

fn lookup(
    preds: &BTreeMap<StatementKey, Label>,
    table: &TableDocument,
    stmt_id: &str,
) -> Result<Label, EvalError> {
    let key = StatementKey::new(table.table_id(), stmt_id);
    preds
        .get(&key)
        .copied()
        .ok_or(EvalError::MissingPrediction(key))
}

/// Macro (or micro) F1 over Entailed, Refuted and Unknown.
pub fn score_3way(
    preds: &BTreeMap<StatementKey, Label>,
    gold: &[TableDocument],
    averaging: Averaging,
) -> Result<ProtocolScore, EvalError> {
    let mut per_table = Vec::new();
    for table in gold {
        let mut counts = [Counts::default(); 3];
        let mut n = 0;
        for s in table.statements() {
            let Some(g) = s.gold_label else { continue };
            let p = lookup(preds, table, &s.stmt_id)?;
            n += 1;
            if g == p {
                counts[g.index()].tp += 1;
            } else {
                counts[g.index()].fn_ += 1;
                counts[p.index()].fp += 1;
            }
        }
        if n > 0 {
            per_table.push(TableScore {
                table_id: table.table_id().into(),
                score: combine(&counts, averaging),
                statements: n,
            });
        }
    }
    Ok(overall(per_table))
}

/// F1 over Entailed and Refuted on statements whose gold label is not
/// Unknown. An Unknown prediction is a false negative for the gold class and
/// a false positive for nothing.
pub fn score_2way(
    preds: &BTreeMap<StatementKey, Label>,
    gold: &[TableDocument],
    averaging: Averaging,
) -> Result<ProtocolScore, EvalError> {
    let mut per_table = Vec::new();
    for table in gold {
        let mut counts = [Counts::default(); 2];
        let mut n = 0;
        for s in table.statements() {
            let g = match s.gold_label {
                Some(l @ (Label::Entailed | Label::Refuted)) => l,
                _ => continue,
            };
            let p = lookup(preds, table, &s.stmt_id)?;
            n += 1;
            if g == p {
                counts[g.index()].tp += 1;
            } else {
                counts[g.index()].fn_ += 1;
                if p != Label::Unknown {
                    counts[p.index()].fp += 1;
                }
            }
        }
        if n > 0 {
            per_table.push(TableScore {
                table_id: table.table_id().into(),
                score: combine(&counts, averaging),
                statements: n,
            });
        }
    }
    Ok(overall(per_table))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskAReport {
    pub three_way: ProtocolScore,
    pub two_way: ProtocolScore,
    /// `confusion[gold][predicted]` over every gold-labeled statement.
    pub confusion: [[usize; 3]; 3],
}

pub fn task_a_report(
    preds: &BTreeMap<StatementKey, Label>,
    gold: &[TableDocument],
    averaging: Averaging,
) -> Result<TaskAReport, EvalError> {
    let three_way = score_3way(preds, gold, averaging)?;
    let two_way = score_2way(preds, gold, averaging)?;
    let mut confusion = [[0; 3]; 3];
    for table in gold {
        for s in table.statements() {
            if let Some(g) = s.gold_label {
                let p = lookup(preds, table, &s.stmt_id)?;
                confusion[g.index()][p.index()] += 1;
            }
        }
    }
    Ok(TaskAReport {
        three_way,
        two_way,
        confusion,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatementScore {
    pub key: StatementKey,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Index of the gold version that gave the best F1.
    pub best_version: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskBReport {
    pub per_table: Vec<TableScore>,
    pub overall: f64,
    pub statements: Vec<StatementScore>,
}

/// Cell-level F1 with relevant cells as positives, taking the best-matching
/// gold version per statement. Statements without gold evidence or with a
/// gold Unknown label are skipped.
pub fn score_taskb(
    preds: &BTreeMap<StatementKey, EvidenceMap>,
    gold: &[TableDocument],
) -> Result<TaskBReport, EvalError> {
    let mut per_table = Vec::new();
    let mut statements = Vec::new();
    for table in gold {
        let mut table_scores = Vec::new();
        for s in table.statements() {
            let versions = match (&s.gold_evidence, s.gold_label) {
                (_, Some(Label::Unknown)) | (None, _) => continue,
                (Some(v), _) if v.is_empty() => continue,
                (Some(v), _) => v,
            };
            let key = table.key(s);
            let pred = preds
                .get(&key)
                .ok_or_else(|| EvalError::MissingPrediction(key.clone()))?;
            if (pred.rows(), pred.cols()) != (table.row_count(), table.col_count()) {
                return Err(EvalError::ShapeMismatch {
                    key,
                    rows: table.row_count(),
                    cols: table.col_count(),
                    got_rows: pred.rows(),
                    got_cols: pred.cols(),
                });
            }
            let predicted = pred.relevant_cells();
            let mut best: Option<(usize, Prf)> = None;
            for (i, version) in versions.iter().enumerate() {
                let tp = predicted.intersection(&version.relevant_cells).count();
                let score = prf(tp, predicted.len() - tp, version.relevant_cells.len() - tp);
                if best.is_none_or(|(_, b)| score.f1 > b.f1) {
                    best = Some((i, score));
                }
            }
            let (best_version, score) = best.unwrap_or_default();
            table_scores.push((s.stmt_id.as_str(), score.f1));
            statements.push(StatementScore {
                key,
                precision: score.precision,
                recall: score.recall,
                f1: score.f1,
                best_version,
            });
        }
        if !table_scores.is_empty() {
            per_table.push(TableScore {
                table_id: table.table_id().into(),
                score: mean_in_key_order(table_scores.iter().copied()),
                statements: table_scores.len(),
            });
        }
    }
    let scored = overall(per_table);
    Ok(TaskBReport {
        per_table: scored.per_table,
        overall: scored.overall,
        statements,
    })
}
