//! Corpus merging and synthetic "Unknown" statements.
//!
//! For every table with `s` statements, `floor(s * ratio)` statements are
//! borrowed from other tables and relabeled Unknown. Donors are drawn
//! uniformly without replacement from the pooled original statements of all
//! other tables, with a single [`SplitMix64`] stream consumed in table order.
//!
//! A leakage guard rejects a donor when more than `leakage_threshold` of its
//! normalized unigrams occur in the target table's cells or caption, since
//! such a statement may well be decidable from the table. A rejected slot is
//! redrawn up to `max_redraws` times; if every candidate leaks, the one with
//! the lowest leakage (earliest drawn on ties) is used. Every candidate drawn
//! for a table, kept or not, is excluded from later draws for that table.
//! A threshold of 0 disables the guard.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::corpus::{check_unique_table_ids, CorpusError, Label, Statement, TableDocument};
use crate::rng::SplitMix64;
use crate::textnorm::{normalize, AbbrevTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentError {
    #[error("augmentation needs at least two tables, got {0}")]
    TooFewTables(usize),
    #[error("ratio must lie in (0, 1], got {0}")]
    BadRatio(String),
    #[error("leakage threshold must lie in [0, 1], got {0}")]
    BadThreshold(f64),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Exact rational in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u32,
    den: u32,
}

impl Ratio {
    pub const HALF: Ratio = Ratio { num: 1, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<Self, AugmentError> {
        if num == 0 || den == 0 || num > den {
            return Err(AugmentError::BadRatio(format!("{num}/{den}")));
        }
        Ok(Ratio { num, den })
    }

    /// `floor(count * self)`.
    pub fn floor_of(self, count: usize) -> usize {
        (count as u128 * self.num as u128 / self.den as u128) as usize
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `a/b` or a decimal such as `0.5`.
impl FromStr for Ratio {
    type Err = AugmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AugmentError::BadRatio(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Ratio::new(n, d).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u32.pow(frac.len() as u32);
        let int: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u32 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ratio::new(num, den).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentConfig {
    pub rng_seed: u64,
    pub unknown_ratio: Ratio,
    /// Maximum tolerated fraction of donor unigrams found in the target
    /// table. 0 turns the guard off.
    pub leakage_threshold: f64,
    pub max_redraws: usize,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            rng_seed: 0,
            unknown_ratio: Ratio::HALF,
            leakage_threshold: 0.5,
            max_redraws: 10,
        }
    }
}

/// A table whose quota could not be met because its donor pool ran dry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolExhausted {
    pub table_id: String,
    pub requested: usize,
    pub appended: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub corpus: Vec<TableDocument>,
    pub warnings: Vec<PoolExhausted>,
}

/// Appends `external` to `base`, prefixing every external table id.
pub fn merge_corpora(
    base: Vec<TableDocument>,
    external: Vec<TableDocument>,
    prefix: &str,
) -> Result<Vec<TableDocument>, AugmentError> {
    let mut merged = base;
    merged.reserve(external.len());
    for doc in external {
        let id = format!("{prefix}{}", doc.table_id());
        merged.push(doc.with_table_id(id)?);
    }
    check_unique_table_ids(&merged)?;
    Ok(merged)
}

struct Donor<'a> {
    table_id: &'a str,
    stmt: &'a Statement,
}

pub fn generate_unknown(
    corpus: Vec<TableDocument>,
    config: &AugmentConfig,
    abbrevs: &AbbrevTable,
) -> Result<Augmented, AugmentError> {
    if corpus.len() < 2 {
        return Err(AugmentError::TooFewTables(corpus.len()));
    }
    if !(0.0..=1.0).contains(&config.leakage_threshold) {
        return Err(AugmentError::BadThreshold(config.leakage_threshold));
    }
    let guard = config.leakage_threshold > 0.0;

    let mut offsets = Vec::with_capacity(corpus.len());
    let mut pool = Vec::new();
    for doc in &corpus {
        offsets.push(pool.len());
        pool.extend(doc.statements().iter().map(|stmt| Donor {
            table_id: doc.table_id(),
            stmt,
        }));
    }
    let pool_unigrams: Vec<BTreeSet<String>> = if guard {
        pool.iter()
            .map(|d| {
                normalize(&d.stmt.text, abbrevs)
                    .into_inner()
                    .into_iter()
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut rng = SplitMix64::new(config.rng_seed);
    let mut additions: Vec<Vec<Statement>> = Vec::with_capacity(corpus.len());
    let mut warnings = Vec::new();

    for (t, doc) in corpus.iter().enumerate() {
        let own = doc.statements().len();
        let quota = config.unknown_ratio.floor_of(own);
        let mut added = Vec::with_capacity(quota);
        if quota == 0 {
            additions.push(added);
            continue;
        }
        let start = offsets[t];
        let available = pool.len() - own;
        let table_bag = if guard {
            table_unigrams(doc, abbrevs)
        } else {
            BTreeSet::new()
        };
        let leakage = |idx: usize| -> f64 {
            let grams = &pool_unigrams[idx];
            if grams.is_empty() {
                return 0.0;
            }
            grams.iter().filter(|g| table_bag.contains(*g)).count() as f64 / grams.len() as f64
        };

        let mut seen = BTreeSet::new();
        let mut ids: BTreeSet<String> =
            doc.statements().iter().map(|s| s.stmt_id.clone()).collect();
        'slots: for _ in 0..quota {
            let mut best: Option<(f64, usize)> = None;
            for _ in 0..=config.max_redraws {
                if seen.len() == available {
                    break;
                }
                let idx = loop {
                    let u = rng.below(available as u64) as usize;
                    let idx = if u < start { u } else { u + own };
                    if !seen.contains(&idx) {
                        break idx;
                    }
                };
                seen.insert(idx);
                if !guard {
                    best = Some((0.0, idx));
                    break;
                }
                let leak = leakage(idx);
                if best.is_none_or(|(b, _)| leak < b) {
                    best = Some((leak, idx));
                }
                if leak <= config.leakage_threshold {
                    break;
                }
            }
            let Some((_, idx)) = best else {
                break 'slots;
            };
            let donor = &pool[idx];
            let id = fresh_id(&mut ids, donor);
            added.push(Statement {
                stmt_id: id,
                text: donor.stmt.text.clone(),
                gold_label: Some(Label::Unknown),
                gold_evidence: None,
            });
        }
        if added.len() < quota {
            warnings.push(PoolExhausted {
                table_id: doc.table_id().to_string(),
                requested: quota,
                appended: added.len(),
            });
        }
        additions.push(added);
    }

    let corpus = corpus
        .into_iter()
        .zip(additions)
        .map(|(doc, extra)| doc.with_appended(extra))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Augmented { corpus, warnings })
}

fn table_unigrams(doc: &TableDocument, abbrevs: &AbbrevTable) -> BTreeSet<String> {
    let mut bag: BTreeSet<String> = normalize(doc.caption(), abbrevs)
        .into_inner()
        .into_iter()
        .collect();
    for cell in doc.cells() {
        bag.extend(normalize(&cell.text, abbrevs).into_inner());
    }
    bag
}

fn fresh_id(ids: &mut BTreeSet<String>, donor: &Donor<'_>) -> String {
    let base = format!("unknown-{}-{}", donor.table_id, donor.stmt.stmt_id);
    let mut id = base.clone();
    let mut n = 1;
    while ids.contains(&id) {
        id = format!("{base}-{n}");
        n += 1;
    }
    ids.insert(id.clone());
    id
}
