//! Core algorithms for table-based statement verification.
//!
//! Everything in this crate is pure computation over in-memory values and
//! only needs `alloc`: the corpus model and statistics, text normalization,
//! content-snapshot selection, "Unknown" augmentation, the lexical baseline
//! classifier, the vote-layer ensemble, rule-based evidence selection and
//! the task scorers. File formats, XML parsing and the command line live in
//! the `tabfact-kit` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod augment;
pub mod classify;
pub mod corpus;
pub mod ensemble;
pub mod eval;
pub mod evidence;
pub mod rng;
pub mod snapshot;
pub mod textnorm;

pub use corpus::{
    Cell, CorpusError, CorpusStats, EvidenceVersion, Label, Statement, StatementKey, Summary,
    TableDocument,
};
pub use textnorm::{AbbrevTable, TokenSeq};
