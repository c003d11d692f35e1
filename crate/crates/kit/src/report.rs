//! JSON and aligned-text renderings of corpus statistics and scores.

use std::fmt::Write;

use serde::Serialize;
use tabfact_core::eval::{Averaging, ProtocolScore, TableScore, TaskAReport, TaskBReport};
use tabfact_core::{CorpusStats, Label, Summary};

#[derive(Serialize)]
struct SummaryJson {
    max: usize,
    min: usize,
    mean: f64,
}

impl From<Summary> for SummaryJson {
    fn from(s: Summary) -> Self {
        SummaryJson {
            max: s.max,
            min: s.min,
            mean: s.mean,
        }
    }
}

#[derive(Serialize)]
struct LabelCounts {
    entailed: usize,
    refuted: usize,
    unknown: usize,
    unlabeled: usize,
}

#[derive(Serialize)]
struct StatsJson {
    tables: usize,
    statements: usize,
    labels: LabelCounts,
    statement_tokens: SummaryJson,
    table_rows: SummaryJson,
    row_tokens: SummaryJson,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn stats_json(stats: &CorpusStats) -> String {
    pretty(&StatsJson {
        tables: stats.table_count,
        statements: stats.statement_count,
        labels: LabelCounts {
            entailed: stats.entailed,
            refuted: stats.refuted,
            unknown: stats.unknown,
            unlabeled: stats.unlabeled,
        },
        statement_tokens: stats.statement_tokens.into(),
        table_rows: stats.table_rows.into(),
        row_tokens: stats.row_tokens.into(),
    })
}

pub fn stats_text(stats: &CorpusStats) -> String {
    let mut out = String::new();
    let counts = [
        ("tables", stats.table_count),
        ("statements", stats.statement_count),
        ("entailed", stats.entailed),
        ("refuted", stats.refuted),
        ("unknown", stats.unknown),
        ("unlabeled", stats.unlabeled),
    ];
    for (name, n) in counts {
        writeln!(out, "{name:<18}{n:>10}").unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "{:<18}{:>10}{:>10}{:>10}", "", "max", "min", "mean").unwrap();
    let summaries = [
        ("statement tokens", stats.statement_tokens),
        ("table rows", stats.table_rows),
        ("row tokens", stats.row_tokens),
    ];
    for (name, s) in summaries {
        writeln!(out, "{name:<18}{:>10}{:>10}{:>10.2}", s.max, s.min, s.mean).unwrap();
    }
    out
}

#[derive(Serialize)]
struct TableJson<'a> {
    table_id: &'a str,
    score: f64,
    statements: usize,
}

#[derive(Serialize)]
struct ProtocolJson<'a> {
    overall: f64,
    per_table: Vec<TableJson<'a>>,
}

fn tables_json(tables: &[TableScore]) -> Vec<TableJson<'_>> {
    tables
        .iter()
        .map(|t| TableJson {
            table_id: &t.table_id,
            score: t.score,
            statements: t.statements,
        })
        .collect()
}

impl<'a> From<&'a ProtocolScore> for ProtocolJson<'a> {
    fn from(p: &'a ProtocolScore) -> Self {
        ProtocolJson {
            overall: p.overall,
            per_table: tables_json(&p.per_table),
        }
    }
}

#[derive(Serialize)]
struct ConfusionJson {
    labels: [&'static str; 3],
    /// Rows are gold labels, columns predicted labels.
    counts: [[usize; 3]; 3],
}

#[derive(Serialize)]
struct TaskAJson<'a> {
    averaging: &'static str,
    three_way: ProtocolJson<'a>,
    two_way: ProtocolJson<'a>,
    confusion: ConfusionJson,
}

#[derive(Serialize)]
struct StatementJson<'a> {
    table_id: &'a str,
    stmt_id: &'a str,
    precision: f64,
    recall: f64,
    f1: f64,
    best_version: usize,
}

#[derive(Serialize)]
struct TaskBJson<'a> {
    overall: f64,
    per_table: Vec<TableJson<'a>>,
    statements: Vec<StatementJson<'a>>,
}

#[derive(Serialize)]
struct ScoreJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    task_a: Option<TaskAJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    task_b: Option<TaskBJson<'a>>,
}

pub fn averaging_name(a: Averaging) -> &'static str {
    match a {
        Averaging::Macro => "macro",
        Averaging::Micro => "micro",
    }
}

const LABELS: [&str; 3] = ["entailed", "refuted", "unknown"];

pub fn score_json(
    task_a: Option<(&TaskAReport, Averaging)>,
    task_b: Option<&TaskBReport>,
) -> String {
    let task_a = task_a.map(|(r, avg)| TaskAJson {
        averaging: averaging_name(avg),
        three_way: (&r.three_way).into(),
        two_way: (&r.two_way).into(),
        confusion: ConfusionJson {
            labels: LABELS,
            counts: r.confusion,
        },
    });
    let task_b = task_b.map(|r| TaskBJson {
        overall: r.overall,
        per_table: tables_json(&r.per_table),
        statements: r
            .statements
            .iter()
            .map(|s| StatementJson {
                table_id: &s.key.table_id,
                stmt_id: &s.key.stmt_id,
                precision: s.precision,
                recall: s.recall,
                f1: s.f1,
                best_version: s.best_version,
            })
            .collect(),
    });
    pretty(&ScoreJson { task_a, task_b })
}

fn protocol_table(out: &mut String, title: &str, p: &ProtocolScore) {
    let width = p
        .per_table
        .iter()
        .map(|t| t.table_id.chars().count())
        .chain(["overall".len(), "table".len()])
        .max()
        .unwrap_or(0)
        + 2;
    writeln!(out, "{title}").unwrap();
    writeln!(
        out,
        "{:<width$}{:>12}{:>10}",
        "table", "statements", "score"
    )
    .unwrap();
    for t in &p.per_table {
        writeln!(
            out,
            "{:<width$}{:>12}{:>10.4}",
            t.table_id, t.statements, t.score
        )
        .unwrap();
    }
    let n: usize = p.per_table.iter().map(|t| t.statements).sum();
    writeln!(out, "{:<width$}{:>12}{:>10.4}", "overall", n, p.overall).unwrap();
}

pub fn score_text(
    task_a: Option<(&TaskAReport, Averaging)>,
    task_b: Option<&TaskBReport>,
) -> String {
    let mut out = String::new();
    if let Some((r, avg)) = task_a {
        let name = averaging_name(avg);
        protocol_table(
            &mut out,
            &format!("Task A, 3-way F1 ({name})"),
            &r.three_way,
        );
        writeln!(out).unwrap();
        protocol_table(&mut out, &format!("Task A, 2-way F1 ({name})"), &r.two_way);
        writeln!(out).unwrap();
        writeln!(out, "confusion (rows gold, columns predicted)").unwrap();
        write!(out, "{:<10}", "").unwrap();
        for l in LABELS {
            write!(out, "{l:>10}").unwrap();
        }
        writeln!(out).unwrap();
        for g in Label::ALL {
            write!(out, "{:<10}", g.as_str()).unwrap();
            for p in Label::ALL {
                write!(out, "{:>10}", r.confusion[g.index()][p.index()]).unwrap();
            }
            writeln!(out).unwrap();
        }
    }
    if let Some(r) = task_b {
        if task_a.is_some() {
            writeln!(out).unwrap();
        }
        let p = ProtocolScore {
            per_table: r.per_table.clone(),
            overall: r.overall,
        };
        protocol_table(&mut out, "Task B, cell F1", &p);
    }
    out
}
