//! Line-oriented JSON records: one table document, snapshot, prediction or
//! evidence map per line. Every record carries a `version` field.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use tabfact_core::evidence::{EvidenceError, EvidenceMap, Rule, RuleTrace};
use tabfact_core::snapshot::Snapshot;
use tabfact_core::{CorpusError, EvidenceVersion, Label, Statement, StatementKey, TableDocument};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported record version {0}")]
    Version(u32),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
    #[error("unknown rule id `{0}`")]
    Rule(String),
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{line}: {source}")]
    Record {
        path: String,
        line: usize,
        source: InterchangeError,
    },
}

/// Labels as lowercase strings, parsed case-insensitively.
pub mod label_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};
    use tabfact_core::Label;

    pub fn serialize<S: Serializer>(label: &Label, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(label.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Label, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(de::Error::custom)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(label: &Option<Label>, s: S) -> Result<S::Ok, S::Error> {
            match label {
                Some(l) => s.serialize_some(l.as_str()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Label>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|raw| raw.parse().map_err(de::Error::custom))
                .transpose()
        }
    }
}

fn version() -> u32 {
    FORMAT_VERSION
}

#[derive(Serialize, Deserialize)]
struct DocumentRecord {
    #[serde(default = "version")]
    version: u32,
    doc_id: String,
    table_id: String,
    caption: String,
    legend: String,
    grid: Vec<Vec<String>>,
    header_rows: usize,
    statements: Vec<StatementRecord>,
}

#[derive(Serialize, Deserialize)]
struct StatementRecord {
    id: String,
    text: String,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "label_serde::opt"
    )]
    label: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evidence: Option<Vec<Vec<[usize; 2]>>>,
}

fn check_version(v: u32) -> Result<(), InterchangeError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(InterchangeError::Version(v))
    }
}

/// One JSON line, without the trailing newline.
pub fn to_interchange(doc: &TableDocument) -> String {
    let record = DocumentRecord {
        version: FORMAT_VERSION,
        doc_id: doc.doc_id().into(),
        table_id: doc.table_id().into(),
        caption: doc.caption().into(),
        legend: doc.legend().into(),
        grid: doc.text_grid(),
        header_rows: doc.header_rows(),
        statements: doc
            .statements()
            .iter()
            .map(|s| StatementRecord {
                id: s.stmt_id.clone(),
                text: s.text.clone(),
                label: s.gold_label,
                evidence: s.gold_evidence.as_ref().map(|versions| {
                    versions
                        .iter()
                        .map(|v| v.relevant_cells.iter().map(|&(r, c)| [r, c]).collect())
                        .collect()
                }),
            })
            .collect(),
    };
    serde_json::to_string(&record).expect("document records always serialize")
}

pub fn from_interchange(line: &str) -> Result<TableDocument, InterchangeError> {
    let record: DocumentRecord = serde_json::from_str(line)?;
    check_version(record.version)?;
    let statements = record
        .statements
        .into_iter()
        .map(|s| Statement {
            stmt_id: s.id,
            text: s.text,
            gold_label: s.label,
            gold_evidence: s.evidence.map(|versions| {
                versions
                    .into_iter()
                    .map(|cells| EvidenceVersion::new(cells.into_iter().map(|[r, c]| (r, c))))
                    .collect()
            }),
        })
        .collect();
    Ok(TableDocument::new(
        record.doc_id,
        record.table_id,
        record.caption,
        record.legend,
        record.grid,
        record.header_rows,
        statements,
    )?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SnapshotRecord {
    #[serde(default = "version")]
    version: u32,
    table_id: String,
    stmt_id: String,
    rows: Vec<usize>,
}

pub fn snapshot_to_line(snap: &Snapshot) -> String {
    let record = SnapshotRecord {
        version: FORMAT_VERSION,
        table_id: snap.table_id.clone(),
        stmt_id: snap.stmt_id.clone(),
        rows: snap.row_indices.clone(),
    };
    serde_json::to_string(&record).expect("snapshot records always serialize")
}

pub fn snapshot_from_line(line: &str) -> Result<Snapshot, InterchangeError> {
    let r: SnapshotRecord = serde_json::from_str(line)?;
    check_version(r.version)?;
    Ok(Snapshot {
        table_id: r.table_id,
        stmt_id: r.stmt_id,
        row_indices: r.rows,
    })
}

/// Task A output for one statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    #[serde(default = "version")]
    pub version: u32,
    pub table_id: String,
    pub stmt_id: String,
    #[serde(with = "label_serde")]
    pub label: Label,
    /// Vote-layer probabilities, absent in majority-vote mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<[f64; 3]>,
}

impl Prediction {
    pub fn key(&self) -> StatementKey {
        StatementKey::new(self.table_id.as_str(), self.stmt_id.as_str())
    }
}

pub fn prediction_to_line(p: &Prediction) -> String {
    serde_json::to_string(p).expect("prediction records always serialize")
}

pub fn prediction_from_line(line: &str) -> Result<Prediction, InterchangeError> {
    let p: Prediction = serde_json::from_str(line)?;
    check_version(p.version)?;
    Ok(p)
}

#[derive(Serialize, Deserialize)]
struct EvidenceRecord {
    #[serde(default = "version")]
    version: u32,
    table_id: String,
    stmt_id: String,
    #[serde(with = "label_serde")]
    label: Label,
    rows: usize,
    cols: usize,
    runs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<Vec<String>>>,
}

/// A decoded evidence line. `trace` holds the rule ids per cell, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceLine {
    pub label: Label,
    pub map: EvidenceMap,
    pub trace: Option<Vec<Vec<Rule>>>,
}

fn rule_from_id(id: &str) -> Result<Rule, InterchangeError> {
    [
        Rule::AllEntailed,
        Rule::HeaderColumn,
        Rule::FirstColumnRow,
        Rule::HeaderAndFirstColumn,
        Rule::CellMatch,
    ]
    .into_iter()
    .find(|r| r.id() == id)
    .ok_or_else(|| InterchangeError::Rule(id.into()))
}

/// Verdicts are run-length encoded: alternating irrelevant/relevant runs,
/// row-major, starting with an irrelevant run.
pub fn evidence_to_line(label: Label, map: &EvidenceMap, trace: Option<&RuleTrace>) -> String {
    let trace = trace.map(|t| {
        (0..t.rows())
            .flat_map(|r| (0..t.cols()).map(move |c| (r, c)))
            .map(|(r, c)| {
                t.rules_at(r, c)
                    .iter()
                    .map(|rule| rule.id().to_string())
                    .collect()
            })
            .collect()
    });
    let record = EvidenceRecord {
        version: FORMAT_VERSION,
        table_id: map.table_id.clone(),
        stmt_id: map.stmt_id.clone(),
        label,
        rows: map.rows(),
        cols: map.cols(),
        runs: map.to_runs(),
        trace,
    };
    serde_json::to_string(&record).expect("evidence records always serialize")
}

pub fn evidence_from_line(line: &str) -> Result<EvidenceLine, InterchangeError> {
    let r: EvidenceRecord = serde_json::from_str(line)?;
    check_version(r.version)?;
    let map = EvidenceMap::from_runs(r.table_id, r.stmt_id, r.rows, r.cols, &r.runs)?;
    let trace = r
        .trace
        .map(|cells| {
            cells
                .iter()
                .map(|ids| ids.iter().map(|id| rule_from_id(id)).collect())
                .collect::<Result<Vec<Vec<Rule>>, _>>()
        })
        .transpose()?;
    Ok(EvidenceLine {
        label: r.label,
        map,
        trace,
    })
}

/// Reads every non-blank line of `path` through `parse`, reporting the first
/// failure with its line number.
pub fn read_lines<T>(
    path: &Path,
    parse: impl Fn(&str) -> Result<T, InterchangeError>,
) -> Result<Vec<T>, ReadError> {
    let shown = path.display().to_string();
    let io_err = |source| ReadError::Io {
        path: shown.clone(),
        source,
    };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse(&line).map_err(|source| ReadError::Record {
            path: shown.clone(),
            line: i + 1,
            source,
        })?);
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<Vec<TableDocument>, ReadError> {
    read_lines(path, from_interchange)
}

/// Writes one line per item, each terminated by `\n`.
pub fn write_lines<I, S>(path: &Path, lines: I) -> io::Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = BufWriter::new(File::create(path)?);
    for line in lines {
        out.write_all(line.as_ref().as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_corpus(path: &Path, corpus: &[TableDocument]) -> io::Result<()> {
    write_lines(path, corpus.iter().map(to_interchange))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TableDocument {
        let mut s = Statement::new("s1", "mass is 3", Some(Label::Refuted));
        s.gold_evidence = Some(vec![
            EvidenceVersion::new([(1, 0)]),
            EvidenceVersion::new([(0, 1), (1, 1)]),
        ]);
        TableDocument::new(
            "d",
            "t",
            "cap \"q\"",
            "",
            vec![vec!["a".into(), "b".into()], vec!["1".into()]],
            1,
            vec![s, Statement::new("s2", "x", None)],
        )
        .unwrap()
    }

    #[test]
    fn document_round_trip() {
        let doc = sample();
        let line = to_interchange(&doc);
        assert!(!line.contains('\n'));
        assert_eq!(from_interchange(&line).unwrap(), doc);
    }

    #[test]
    fn field_names() {
        let v: serde_json::Value = serde_json::from_str(&to_interchange(&sample())).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in [
            "doc_id",
            "table_id",
            "caption",
            "legend",
            "grid",
            "header_rows",
            "statements",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(
            v["statements"][0]["evidence"][1],
            serde_json::json!([[0, 1], [1, 1]])
        );
    }

    #[test]
    fn rejects_other_versions() {
        let line = to_interchange(&sample()).replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(
            from_interchange(&line),
            Err(InterchangeError::Version(9))
        ));
    }

    #[test]
    fn evidence_round_trip() {
        let map = EvidenceMap::from_cells("t", "s", 2, 3, [(0, 1), (0, 2), (1, 2)]);
        let line = evidence_to_line(Label::Refuted, &map, None);
        assert!(line.contains("\"runs\":[1,2,2,1]"));
        let back = evidence_from_line(&line).unwrap();
        assert_eq!(back.map, map);
        assert_eq!(back.trace, None);
    }

    #[test]
    fn snapshot_and_prediction_round_trip() {
        let snap = Snapshot {
            table_id: "t".into(),
            stmt_id: "s".into(),
            row_indices: vec![1, 4],
        };
        assert_eq!(snapshot_from_line(&snapshot_to_line(&snap)).unwrap(), snap);
        let p = Prediction {
            version: FORMAT_VERSION,
            table_id: "t".into(),
            stmt_id: "s".into(),
            label: Label::Unknown,
            probs: Some([0.1, 0.2, 0.7]),
        };
        assert_eq!(prediction_from_line(&prediction_to_line(&p)).unwrap(), p);
    }
}
