//! Reader for the per-table XML corpus format.
//!
//! ```xml
//! <document id="d1">
//!   <table id="t1" header_rows="1">
//!     <caption text="..."/>
//!     <legend text="..."/>
//!     <row><cell text="Sample"/><cell text="Mass"/></row>
//!     <statements>
//!       <statement id="s1" text="..." type="refuted">
//!         <evidence version="1"><cell row="1" col="0"/></evidence>
//!       </statement>
//!     </statements>
//!   </table>
//! </document>
//! ```
//!
//! A bare `<table>` root is accepted too; its id then doubles as the
//! document id. Unrecognized elements are ignored.

use roxmltree::{Document, Node};
use tabfact_core::{CorpusError, EvidenceVersion, Label, Statement, TableDocument};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum XmlError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: u32,
        col: u32,
        message: String,
    },
    #[error("input is not UTF-8")]
    Encoding,
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

fn schema(msg: impl Into<String>) -> XmlError {
    XmlError::Schema(msg.into())
}

fn text_of(node: Node) -> String {
    match node.attribute("text") {
        Some(t) => t.to_string(),
        None => node.text().map(str::trim).unwrap_or_default().to_string(),
    }
}

fn index_attr(node: Node, name: &str) -> Result<usize, XmlError> {
    let raw = node.attribute(name).ok_or_else(|| {
        schema(format!(
            "<{}> needs a `{name}` attribute",
            node.tag_name().name()
        ))
    })?;
    raw.trim().parse().map_err(|_| {
        schema(format!(
            "`{name}` must be a non-negative integer, got `{raw}`"
        ))
    })
}

fn parse_statement(node: Node) -> Result<Statement, XmlError> {
    let id = node
        .attribute("id")
        .filter(|s| !s.is_empty())
        .ok_or_else(|| schema("statement without an id"))?;
    let label = match node.attribute("type") {
        None => None,
        Some(t) => Some(t.parse::<Label>()?),
    };
    let mut stmt = Statement::new(id, node.attribute("text").unwrap_or_default(), label);
    let mut versions = Vec::new();
    for ev in node.children().filter(|n| n.has_tag_name("evidence")) {
        let mut cells = Vec::new();
        for cell in ev.children().filter(|n| n.has_tag_name("cell")) {
            cells.push((index_attr(cell, "row")?, index_attr(cell, "col")?));
        }
        versions.push(EvidenceVersion::new(cells));
    }
    if !versions.is_empty() {
        stmt.gold_evidence = Some(versions);
    }
    Ok(stmt)
}

pub fn parse_xml(bytes: &[u8]) -> Result<TableDocument, XmlError> {
    let text = std::str::from_utf8(bytes).map_err(|_| XmlError::Encoding)?;
    let doc = Document::parse(text).map_err(|e| {
        let pos = e.pos();
        XmlError::Syntax {
            line: pos.row,
            col: pos.col,
            message: e.to_string(),
        }
    })?;
    let root = doc.root_element();
    let (doc_id, table) = match root.tag_name().name() {
        "document" => {
            let table = root
                .children()
                .find(|n| n.has_tag_name("table"))
                .ok_or_else(|| schema("<document> has no <table>"))?;
            (root.attribute("id").map(str::to_string), table)
        }
        "table" => (None, root),
        other => return Err(schema(format!("unexpected root element <{other}>"))),
    };
    let table_id = table
        .attribute("id")
        .filter(|s| !s.is_empty())
        .ok_or_else(|| schema("missing table id"))?;
    let doc_id = doc_id.unwrap_or_else(|| table_id.to_string());

    let child_text = |tag: &str| {
        table
            .children()
            .find(|n| n.has_tag_name(tag))
            .map(text_of)
            .unwrap_or_default()
    };
    let caption = child_text("caption");
    let legend = child_text("legend");

    let rows: Vec<Vec<String>> = table
        .children()
        .filter(|n| n.has_tag_name("row"))
        .map(|row| {
            row.children()
                .filter(|n| n.has_tag_name("cell"))
                .map(text_of)
                .collect()
        })
        .collect();
    let header_rows = match table.attribute("header_rows") {
        Some(_) => index_attr(table, "header_rows")?,
        None => TableDocument::DEFAULT_HEADER_ROWS,
    }
    .min(rows.len());

    let mut statements = Vec::new();
    for group in table.children().filter(|n| n.has_tag_name("statements")) {
        for node in group.children().filter(|n| n.has_tag_name("statement")) {
            statements.push(parse_statement(node)?);
        }
    }
    Ok(TableDocument::new(
        doc_id,
        table_id,
        caption,
        legend,
        rows,
        header_rows,
        statements,
    )?)
}
