//! Vote-layer persistence.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tabfact_core::ensemble::{EnsembleError, TrainConfig, VoteLayer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: expected 3 weight rows, got {got}")]
    Rows { path: String, got: usize },
    #[error("{path}: {source}")]
    Layer {
        path: String,
        source: Box<EnsembleError>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub learning_rate: f64,
    pub epochs: usize,
    pub rng_seed: u64,
    pub l2: f64,
}

impl From<&TrainConfig> for ConfigEcho {
    fn from(c: &TrainConfig) -> Self {
        ConfigEcho {
            learning_rate: c.learning_rate,
            epochs: c.epochs,
            rng_seed: c.rng_seed,
            l2: c.l2,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelRecord {
    model_names: Vec<String>,
    /// Three rows (entailed, refuted, unknown), each of length 3 × models.
    weights: Vec<Vec<f64>>,
    bias: [f64; 3],
    config: ConfigEcho,
    #[serde(default)]
    final_loss: Option<f64>,
}

/// A vote layer together with the settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub layer: VoteLayer,
    pub config: ConfigEcho,
    pub final_loss: Option<f64>,
}

impl SavedModel {
    pub fn to_json(&self) -> String {
        let record = ModelRecord {
            model_names: self.layer.model_names().to_vec(),
            weights: (0..3).map(|k| self.layer.weight_row(k).to_vec()).collect(),
            bias: self.layer.bias(),
            config: self.config.clone(),
            final_loss: self.final_loss,
        };
        let mut s = serde_json::to_string_pretty(&record).expect("model records always serialize");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_json())
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io {
            path: shown.clone(),
            source,
        })?;
        let r: ModelRecord =
            serde_json::from_str(&text).map_err(|source| ModelFileError::Json {
                path: shown.clone(),
                source,
            })?;
        if r.weights.len() != 3 {
            return Err(ModelFileError::Rows {
                path: shown,
                got: r.weights.len(),
            });
        }
        let layer =
            VoteLayer::new(r.model_names, r.weights.concat(), r.bias).map_err(|source| {
                ModelFileError::Layer {
                    path: shown,
                    source: Box::new(source),
                }
            })?;
        Ok(SavedModel {
            layer,
            config: r.config,
            final_loss: r.final_loss,
        })
    }
}
