//! Per-run record of what was invoked, with which settings, on which files.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Every resolved setting, defaults included.
    pub config: BTreeMap<String, Value>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            config: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("config values always serialize");
        self.config.insert(key.into(), v);
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifests always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_json())
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(io::Error::other)
    }

    /// Equality ignoring the timestamp.
    pub fn same_run(&self, other: &RunManifest) -> bool {
        RunManifest {
            timestamp: 0,
            ..self.clone()
        } == RunManifest {
            timestamp: 0,
            ..other.clone()
        }
    }
}

/// `out.jsonl` becomes `out.jsonl.manifest.json`.
pub fn default_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_same_run() {
        let mut m = RunManifest::new("augment");
        m.set("seed", 7u64)
            .set("ratio", "1/2")
            .input(Path::new("a.jsonl"));
        let f = tempfile::NamedTempFile::new().unwrap();
        m.write(f.path()).unwrap();
        let back = RunManifest::read(f.path()).unwrap();
        assert_eq!(back, m);
        let later = RunManifest {
            timestamp: m.timestamp + 100,
            ..m.clone()
        };
        assert!(later.same_run(&m));
        m.set("seed", 8u64);
        assert!(!later.same_run(&m));
    }

    #[test]
    fn manifest_path() {
        assert_eq!(
            default_path(Path::new("out/x.jsonl")),
            Path::new("out/x.jsonl.manifest.json")
        );
    }
}
