//! Declarative shape validation of generated graphs.
//!
//! Schemas are JSON documents listing node shapes per target class; see
//! `docs/shapes.md` for the format. The crate bundles a CodeMeta 3.0
//! schema ([`ShapeSchema::bundled`]).

mod schema;
mod validate;

pub use schema::{load_shape_schema, NodeShape, PropertyShape, SchemaError, Severity, ShapeSchema, ValueKind};
pub use validate::{
    is_constrained, single_triple_mutations, validate, validate_framed, Mutation, ReportEntry, ValidationReport,
};
