//! JSON-LD output: the flat expanded form, CodeMeta-style framing with
//! compaction, and re-expansion of framed documents back into triples.

mod context;
mod expand;
mod frame;

use alloc::string::String;
use alloc::vec::Vec;

pub use context::{
    context_from_value, load_context, Coercion, ContextSource, JsonLdContext, TermDefinition, CODEMETA_CONTEXT_URL,
};
pub use expand::{expand, parse_expanded, serialize_expanded};
pub use frame::frame;

use crate::vocab::SOFTWARE_SOURCE_CODE;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonLdError {
    #[error("no node of type <{root_type}> that is not referenced by another node")]
    NoRoot { root_type: String },
    #[error("IRI <{iri}> is ambiguous: terms {terms:?} all map to it")]
    Collision { iri: String, terms: Vec<String> },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
}

/// How `@context` is written into framed output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextEmission {
    /// The full context object.
    Inline,
    /// A URL string.
    Reference(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameOptions {
    pub root_type: String,
    pub context_emission: ContextEmission,
}

impl Default for FrameOptions {
    fn default() -> Self {
        FrameOptions {
            root_type: SOFTWARE_SOURCE_CODE.into(),
            context_emission: ContextEmission::Inline,
        }
    }
}

/// Re-expands a framed document into a graph.
pub fn unframe(doc: &serde_json::Value, ctx: &JsonLdContext) -> Result<crate::rdf::RdfGraph, JsonLdError> {
    expand(doc, ctx)
}

#[cfg(test)]
mod tests;
