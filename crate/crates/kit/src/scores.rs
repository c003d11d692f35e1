//! Classifier score files: one `{"model", "table_id", "stmt_id", "scores"}`
//! object per line, scores in `[entailed, refuted, unknown]` order. Any
//! other fields are kept and written back unchanged.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tabfact_core::classify::{ClassifyError, ScoreVector};
use tabfact_core::StatementKey;
use thiserror::Error;

use crate::interchange::write_lines;

#[derive(Debug, Error)]
pub enum ScoreFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{line}: {source}")]
    Json {
        path: String,
        line: usize,
        source: serde_json::Error,
    },
    #[error("{path}:{line}: {source}")]
    Invalid {
        path: String,
        line: usize,
        source: Box<ClassifyError>,
    },
}

#[derive(Serialize, Deserialize)]
struct ScoreLine {
    model: String,
    table_id: String,
    stmt_id: String,
    scores: Vec<f64>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

/// A score vector plus whatever extra fields its line carried.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub vector: ScoreVector,
    pub extra: Map<String, Value>,
}

impl From<ScoreVector> for ScoreRecord {
    fn from(vector: ScoreVector) -> Self {
        ScoreRecord {
            vector,
            extra: Map::new(),
        }
    }
}

pub fn to_line(record: &ScoreRecord) -> String {
    let v = &record.vector;
    let line = ScoreLine {
        model: v.model_name().into(),
        table_id: v.key().table_id.clone(),
        stmt_id: v.key().stmt_id.clone(),
        scores: v.scores().to_vec(),
        extra: record.extra.clone(),
    };
    serde_json::to_string(&line).expect("score lines always serialize")
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRecord>, ScoreFileError> {
    let shown = path.display().to_string();
    let io_err = |source| ScoreFileError::Io {
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
        let raw: ScoreLine =
            serde_json::from_str(&line).map_err(|source| ScoreFileError::Json {
                path: shown.clone(),
                line: i + 1,
                source,
            })?;
        let key = StatementKey::new(raw.table_id, raw.stmt_id);
        let vector = ScoreVector::new(raw.model, key, &raw.scores).map_err(|source| {
            ScoreFileError::Invalid {
                path: shown.clone(),
                line: i + 1,
                source: Box::new(source),
            }
        })?;
        out.push(ScoreRecord {
            vector,
            extra: raw.extra,
        });
    }
    Ok(out)
}

pub fn write_scores(path: &Path, records: &[ScoreRecord]) -> io::Result<()> {
    write_lines(path, records.iter().map(to_line))
}
