//! Source documents and the JSONPath / XPath subsets used by iterators and
//! fields.
//!
//! Supported JSONPath: `$`, dot-separated child steps (a key may contain
//! `:`), `[n]` indices, `['key']` and a single equality filter
//! `[?(@.key=='value')]`. Child steps map implicitly over arrays.
//!
//! Supported XPath: absolute or relative child-axis paths made of element
//! names, `*` or `node()`, each optionally filtered with
//! `[local-name(.)='name']`. Name steps only match elements without a
//! namespace; `local-name()` ignores namespaces.

mod document;
mod jsonpath;
mod xpath;

use alloc::string::String;
use alloc::vec::Vec;

pub use document::{DocumentError, Format, JsonStep, SourceDocument, XmlNode, XmlNodeKind, XmlTree};

use crate::dsl::QueryLanguage;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("unsupported {language} syntax in {query:?}: {reason}")]
    Unsupported {
        language: &'static str,
        query: String,
        reason: String,
    },
    #[error("{language} query {query:?} cannot run against a {format} document")]
    FormatMismatch {
        language: &'static str,
        query: String,
        format: Format,
    },
}

/// Reference to a subtree of a [`SourceDocument`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeHandle {
    Json(Vec<JsonStep>),
    Xml(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryValueKind {
    Scalar(String),
    Node(NodeHandle),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryValue {
    pub kind: QueryValueKind,
    /// Location in the document (`/a/0/b` for JSON, child indices for XML).
    pub position: String,
}

/// Query results in document order. Empty means "no data".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValueSet {
    pub values: Vec<QueryValue>,
}

impl ValueSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeHandle> {
        self.values.iter().filter_map(|v| match &v.kind {
            QueryValueKind::Node(h) => Some(h),
            QueryValueKind::Scalar(_) => None,
        })
    }
}

pub fn eval_jsonpath(query: &str, doc: &SourceDocument, context: Option<&NodeHandle>) -> Result<ValueSet, QueryError> {
    let parsed = jsonpath::JsonPath::parse(query)?;
    match doc.json() {
        Some(root) => Ok(parsed.evaluate(root, context)),
        None => Err(QueryError::FormatMismatch {
            language: "JSONPath",
            query: query.into(),
            format: doc.format(),
        }),
    }
}

pub fn eval_xpath(query: &str, doc: &SourceDocument, context: Option<&NodeHandle>) -> Result<ValueSet, QueryError> {
    let parsed = xpath::XPath::parse(query)?;
    match doc.xml() {
        Some(tree) => Ok(parsed.evaluate(tree, context)),
        None => Err(QueryError::FormatMismatch {
            language: "XPath",
            query: query.into(),
            format: doc.format(),
        }),
    }
}

pub fn evaluate(
    language: QueryLanguage,
    query: &str,
    doc: &SourceDocument,
    context: Option<&NodeHandle>,
) -> Result<ValueSet, QueryError> {
    match language {
        QueryLanguage::JsonPath => eval_jsonpath(query, doc, context),
        QueryLanguage::XPath => eval_xpath(query, doc, context),
    }
}

/// Checks a query's syntax without a document.
pub fn validate_query(language: QueryLanguage, query: &str) -> Result<(), QueryError> {
    match language {
        QueryLanguage::JsonPath => jsonpath::JsonPath::parse(query).map(|_| ()),
        QueryLanguage::XPath => xpath::XPath::parse(query).map(|_| ()),
    }
}
