//! Declarative metadata mapping engine.
//!
//! The crate turns mapping documents (a ShExML-style language of prefixes,
//! sources, iterators, expressions and shapes) plus parsed JSON/XML source
//! documents into an RDF graph, frames that graph into CodeMeta-style
//! JSON-LD, and validates the result against a declarative shape schema.
//!
//! Everything here is pure and `no_std` (with `alloc`); fetching sources,
//! reading files and the command line live in the `metaforge` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod crosswalks;
pub mod dsl;
pub mod engine;
pub mod jsonld;
pub mod query;
pub mod rdf;
pub mod shapes;
#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use dsl::{parse_mapping, resolve_references, MappingDocument, ResolvedMapping};
pub use engine::{generate, GenerateError, Generation, SourceLoader};
pub use jsonld::{frame, FrameOptions, JsonLdContext};
pub use query::{Format, SourceDocument};
pub use rdf::{RdfGraph, Term, Triple};
pub use shapes::{validate, ShapeSchema, ValidationReport};

/// Well-known vocabulary IRIs.
pub mod vocab {
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
    pub const SCHEMA: &str = "http://schema.org/";
    pub const CODEMETA: &str = "https://w3id.org/codemeta/3.0/";
    pub const SOFTWARE_SOURCE_CODE: &str = "http://schema.org/SoftwareSourceCode";
}
