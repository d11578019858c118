//! The mapping language: AST, parser, canonical printer and reference
//! resolution.

mod ast;
mod parser;
mod printer;
mod resolve;

pub use ast::*;
pub use parser::{parse_mapping, ParseError, ParseErrorKind};
pub use printer::print_mapping;
pub use resolve::{resolve_references, ResolveError, ResolveProblem, ResolvedMapping, ShapeLink, ShapeLinkKind};
