//! Mapping evaluation: expressions to binding tables, shapes to RDF.

mod bindings;
pub mod functions;
mod materialize;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use bindings::{evaluate_expression, BindingRow, BindingTable, EvalError};
pub use functions::{apply_function, FunctionError};
pub use materialize::{encode_local, materialize_shapes};

use crate::dsl::{parse_mapping, resolve_references, ParseError, ResolveError, ResolvedMapping, SourceDecl};
use crate::query::SourceDocument;
use crate::rdf::RdfGraph;

/// A non-fatal problem: a skipped triple or shape instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub context: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {}: {}", self.context, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadError {
    pub source: String,
    pub locator: String,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "source {} <{}>: {}", self.source, self.locator, self.message)
    }
}

/// Supplies parsed documents for SOURCE declarations.
pub trait SourceLoader {
    fn load(&self, source: &SourceDecl) -> Result<SourceDocument, LoadError>;

    /// Loads several sources; the default loads them one after another.
    fn load_all(&self, sources: &[SourceDecl]) -> Vec<Result<SourceDocument, LoadError>> {
        sources.iter().map(|s| self.load(s)).collect()
    }
}

/// Loader over documents already in memory, keyed by source name.
impl SourceLoader for BTreeMap<String, SourceDocument> {
    fn load(&self, source: &SourceDecl) -> Result<SourceDocument, LoadError> {
        self.get(&source.name).cloned().ok_or_else(|| LoadError {
            source: source.name.clone(),
            locator: source.locator.clone(),
            message: "no document supplied".into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("parse: {0}")]
    Parse(ParseError),
    #[error("resolve: {0}")]
    Resolve(ResolveError),
    #[error("fetch: {}", join(.0))]
    Fetch(Vec<LoadError>),
    #[error("evaluate: {0}")]
    Evaluate(EvalError),
}

fn join(errors: &[LoadError]) -> String {
    let parts: Vec<String> = errors.iter().map(|e| alloc::format!("{e}")).collect();
    parts.join("; ")
}

impl GenerateError {
    pub fn stage(&self) -> &'static str {
        match self {
            GenerateError::Parse(_) => "parse",
            GenerateError::Resolve(_) => "resolve",
            GenerateError::Fetch(_) => "fetch",
            GenerateError::Evaluate(_) => "evaluate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub graph: RdfGraph,
    pub diagnostics: Vec<Diagnostic>,
    pub tables: BTreeMap<String, BindingTable>,
}

/// Sources read by at least one expression, in declaration order.
pub fn referenced_sources(mapping: &ResolvedMapping) -> Vec<SourceDecl> {
    let used: BTreeSet<&str> = mapping
        .document()
        .expressions
        .iter()
        .flat_map(|e| e.branches.iter().map(|b| b.source.as_str()))
        .collect();
    mapping
        .document()
        .sources
        .iter()
        .filter(|s| used.contains(s.name.as_str()))
        .cloned()
        .collect()
}

/// Parse, resolve, load, evaluate and materialize.
pub fn generate(mapping_text: &str, loader: &dyn SourceLoader) -> Result<Generation, GenerateError> {
    let doc = parse_mapping(mapping_text).map_err(GenerateError::Parse)?;
    let mapping = resolve_references(doc).map_err(GenerateError::Resolve)?;
    let sources = referenced_sources(&mapping);
    let mut docs = BTreeMap::new();
    let mut failures = Vec::new();
    for (decl, result) in sources.iter().zip(loader.load_all(&sources)) {
        match result {
            Ok(d) => {
                docs.insert(decl.name.clone(), d);
            }
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        return Err(GenerateError::Fetch(failures));
    }
    generate_resolved(&mapping, &docs)
}

/// Evaluation and materialization over already loaded documents.
pub fn generate_resolved(
    mapping: &ResolvedMapping,
    docs: &BTreeMap<String, SourceDocument>,
) -> Result<Generation, GenerateError> {
    let mut tables = BTreeMap::new();
    for expr in &mapping.document().expressions {
        let table = evaluate_expression(mapping, &expr.name, docs).map_err(GenerateError::Evaluate)?;
        tables.insert(expr.name.clone(), table);
    }
    let (graph, diagnostics) = materialize_shapes(mapping, &tables);
    Ok(Generation {
        graph,
        diagnostics,
        tables,
    })
}
