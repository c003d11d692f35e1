//! File formats and the command-line pipeline around `tabfact-core`.

pub mod cli;
pub mod interchange;
pub mod manifest;
pub mod model;
pub mod report;
pub mod scores;
pub mod tabfact;
pub mod xml;
