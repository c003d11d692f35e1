//! Text normalization shared by snapshot selection, the lexical baseline and
//! the evidence rules.
//!
//! The pipeline order is fixed: lowercase, split on non-alphanumeric
//! characters, expand abbreviations, stem. Expansion happens before
//! stemming; a stem that itself equals an abbreviation key is expanded as
//! well, which keeps [`normalize`] idempotent on its own output.

mod abbrev;
pub mod stem;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;
use core::str::FromStr;

use thiserror::Error;

pub use abbrev::{AbbrevError, AbbrevTable};

/// Ordered normalized tokens: lowercase, non-empty, expanded and (unless
/// produced by [`normalize_surface`]) stemmed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn join(&self, sep: &str) -> String {
        self.0.join(sep)
    }

    pub fn to_bag(&self) -> BTreeSet<&str> {
        self.0.iter().map(String::as_str).collect()
    }
}

impl Deref for TokenSeq {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

pub fn normalize(text: &str, abbrevs: &AbbrevTable) -> TokenSeq {
    run(text, abbrevs, true)
}

/// [`normalize`] without the stemming stage.
pub fn normalize_surface(text: &str, abbrevs: &AbbrevTable) -> TokenSeq {
    run(text, abbrevs, false)
}

fn run(text: &str, abbrevs: &AbbrevTable, stemming: bool) -> TokenSeq {
    let mut out = Vec::new();
    for token in tokenize(text) {
        abbrevs.resolve(&token, stemming, &mut out);
    }
    TokenSeq(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NgramError {
    #[error("n-gram orders must be positive")]
    ZeroOrder,
    #[error("at least one n-gram order is required")]
    NoOrders,
    #[error("invalid n-gram order `{0}`")]
    Parse(String),
}

/// The set of n-gram lengths used for overlap. Defaults to `{1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramOrders(BTreeSet<usize>);

impl NgramOrders {
    pub fn new(orders: impl IntoIterator<Item = usize>) -> Result<Self, NgramError> {
        let set: BTreeSet<usize> = orders.into_iter().collect();
        if set.is_empty() {
            return Err(NgramError::NoOrders);
        }
        if set.contains(&0) {
            return Err(NgramError::ZeroOrder);
        }
        Ok(NgramOrders(set))
    }

    /// Parses a comma-separated list such as `1,2`.
    pub fn parse(s: &str) -> Result<Self, NgramError> {
        let orders = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| NgramError::Parse(p.into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        NgramOrders::new(orders)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl Default for NgramOrders {
    fn default() -> Self {
        NgramOrders([1, 2].into_iter().collect())
    }
}

impl fmt::Display for NgramOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for NgramOrders {
    type Err = NgramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NgramOrders::parse(s)
    }
}

/// Union over the configured orders of every contiguous token window.
pub fn ngram_set<'a>(tokens: &'a [String], orders: &NgramOrders) -> BTreeSet<&'a [String]> {
    orders.iter().flat_map(|n| tokens.windows(n)).collect()
}

/// `|statement ∩ row| / |statement|`, or 0 for an empty statement set.
pub fn overlap_rate<T: Ord>(statement_grams: &BTreeSet<T>, row_grams: &BTreeSet<T>) -> f64 {
    if statement_grams.is_empty() {
        return 0.0;
    }
    statement_grams.intersection(row_grams).count() as f64 / statement_grams.len() as f64
}
