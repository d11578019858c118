//! Minimal RDF model: terms, triples, a set-semantics graph and N-Triples.

mod graph;
mod iso;
pub mod ntriples;
mod term;

pub use graph::{GraphError, RdfGraph, Triple};
pub use iso::isomorphic;
pub use ntriples::{parse_ntriples, serialize_ntriples, NTriplesError};
pub use term::{is_absolute_iri, is_valid_blank_label, Literal, Term, TermError, TermKind};
