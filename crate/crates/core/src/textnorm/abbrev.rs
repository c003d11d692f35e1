use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::{stem, tokenize};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbbrevError {
    #[error("line {line}: expected `abbreviation<TAB>full form`")]
    MissingTab { line: usize },
    #[error("abbreviation `{0}` must be a single alphanumeric token")]
    BadKey(String),
    #[error("abbreviation `{0}` has an empty full form")]
    EmptyExpansion(String),
    #[error("abbreviation `{0}` is defined twice")]
    Duplicate(String),
    #[error("abbreviation `{0}` expands into itself")]
    Cycle(String),
}

const DEFAULT_TABLE: &str = include_str!("../../data/abbreviations.tsv");

/// Map from a lowercase abbreviation token to its full-form tokens.
///
/// Construction rejects tables whose expansion can reach the key it started
/// from, either directly or because a full-form token stems to another key.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbbrevTable {
    map: BTreeMap<String, Vec<String>>,
}

impl AbbrevTable {
    pub fn empty() -> Self {
        AbbrevTable::default()
    }

    pub fn new<K, V>(entries: impl IntoIterator<Item = (K, V)>) -> Result<Self, AbbrevError>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            let key_tokens = tokenize(k.as_ref());
            let [key] = <[String; 1]>::try_from(key_tokens)
                .map_err(|_| AbbrevError::BadKey(k.as_ref().to_string()))?;
            let full = tokenize(v.as_ref());
            if full.is_empty() {
                return Err(AbbrevError::EmptyExpansion(key));
            }
            if map.insert(key.clone(), full).is_some() {
                return Err(AbbrevError::Duplicate(key));
            }
        }
        let table = AbbrevTable { map };
        for key in table.map.keys() {
            for stemming in [false, true] {
                let mut trail = Vec::new();
                table.check_acyclic(key, stemming, &mut trail)?;
            }
        }
        Ok(table)
    }

    /// Parses the tab-separated file format: one `abbrev<TAB>full form` per
    /// line, `#` starts a comment line, blank lines are ignored.
    pub fn parse_tsv(text: &str) -> Result<Self, AbbrevError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('\t')
                .ok_or(AbbrevError::MissingTab { line: i + 1 })?;
            entries.push((k.trim(), v.trim()));
        }
        AbbrevTable::new(entries)
    }

    pub fn get(&self, key: &str) -> Option<&[String]> {
        self.map.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    fn check_acyclic(
        &self,
        token: &str,
        stemming: bool,
        trail: &mut Vec<String>,
    ) -> Result<(), AbbrevError> {
        if let Some(full) = self.map.get(token) {
            if trail.iter().any(|t| t == token) {
                return Err(AbbrevError::Cycle(trail[0].clone()));
            }
            trail.push(token.to_string());
            for t in full {
                self.check_acyclic(t, stemming, trail)?;
            }
            trail.pop();
        } else if stemming {
            let s = stem::stem(token);
            if s != token && self.map.contains_key(&s) {
                self.check_acyclic(&s, stemming, trail)?;
            }
        }
        Ok(())
    }

    /// Expands one token into `out`. Output tokens are never keys, and with
    /// `stemming` they are stems.
    pub(super) fn resolve(&self, token: &str, stemming: bool, out: &mut Vec<String>) {
        if let Some(full) = self.map.get(token) {
            for t in full {
                self.resolve(t, stemming, out);
            }
        } else if stemming {
            let s = stem::stem(token);
            if s != token && self.map.contains_key(&s) {
                self.resolve(&s, stemming, out);
            } else {
                out.push(s);
            }
        } else {
            out.push(token.to_string());
        }
    }
}

impl AbbrevTable {
    /// The bundled table of common scientific-table abbreviations.
    pub fn builtin() -> Self {
        AbbrevTable::parse_tsv(DEFAULT_TABLE).expect("bundled abbreviation table is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_loads() {
        let t = AbbrevTable::builtin();
        assert_eq!(t.get("no"), Some(&["number".to_string()][..]));
        assert_eq!(t.get("avg").unwrap(), ["average"]);
        assert_eq!(t.get("temp").unwrap(), ["temperature"]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            AbbrevTable::parse_tsv("# c\n\nno number\n"),
            Err(AbbrevError::MissingTab { line: 3 })
        );
        assert_eq!(
            AbbrevTable::parse_tsv("a b\tc\n"),
            Err(AbbrevError::BadKey("a b".into()))
        );
        assert_eq!(
            AbbrevTable::parse_tsv("a\t...\n"),
            Err(AbbrevError::EmptyExpansion("a".into()))
        );
        assert_eq!(
            AbbrevTable::parse_tsv("a\tx\nA\ty\n"),
            Err(AbbrevError::Duplicate("a".into()))
        );
    }

    #[test]
    fn keys_are_lowercased_and_punctuation_dropped() {
        let t = AbbrevTable::parse_tsv("No.\tNumber\n").unwrap();
        assert_eq!(t.get("no").unwrap(), ["number"]);
    }

    #[test]
    fn cycles_are_rejected() {
        assert_eq!(
            AbbrevTable::new([("a", "x a")]),
            Err(AbbrevError::Cycle("a".into()))
        );
        assert!(matches!(
            AbbrevTable::new([("a", "b"), ("b", "a")]),
            Err(AbbrevError::Cycle(_))
        ));
        // "cells" stems to the key "cell", which expands back to "cells".
        assert!(matches!(
            AbbrevTable::new([("cell", "cells")]),
            Err(AbbrevError::Cycle(_))
        ));
    }
}
