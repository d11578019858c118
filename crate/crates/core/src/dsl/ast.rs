use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Parsed mapping document, in declaration order per kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingDocument {
    pub prefixes: Vec<PrefixDecl>,
    pub sources: Vec<SourceDecl>,
    pub functions: Vec<FunctionsDecl>,
    pub iterators: Vec<IteratorDecl>,
    pub expressions: Vec<ExpressionDecl>,
    pub shapes: Vec<ShapeDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixDecl {
    pub label: String,
    pub iri: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDecl {
    pub name: String,
    pub locator: String,
}

/// A FUNCTIONS declaration. The location is kept as written (for example
/// `scala: ../functions.scala`); calls always go to the built-in registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionsDecl {
    pub name: String,
    pub location: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryLanguage {
    JsonPath,
    XPath,
}

impl QueryLanguage {
    pub fn keyword(self) -> &'static str {
        match self {
            QueryLanguage::JsonPath => "jsonpath",
            QueryLanguage::XPath => "xpath",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratorDecl {
    pub name: String,
    pub language: QueryLanguage,
    pub root_query: String,
    pub fields: Vec<FieldDecl>,
    pub children: Vec<IteratorDecl>,
}

impl IteratorDecl {
    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn child(&self, name: &str) -> Option<&IteratorDecl> {
        self.children.iter().find(|c| c.name == name)
    }

    /// Follows a chain of nested iterator names.
    pub fn descend(&self, path: &[String]) -> Option<&IteratorDecl> {
        path.iter().try_fold(self, |it, name| it.child(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub query: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressionDecl {
    pub name: String,
    pub branches: Vec<ExpressionBranch>,
}

/// `source.iterator`, one operand of a UNION.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressionBranch {
    pub source: String,
    pub iterator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixedName {
    pub prefix: String,
    pub local: String,
}

impl PrefixedName {
    pub fn new(prefix: impl Into<String>, local: impl Into<String>) -> Self {
        PrefixedName {
            prefix: prefix.into(),
            local: local.into(),
        }
    }
}

impl fmt::Display for PrefixedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local)
    }
}

/// `expr.field` or `expr.child.field` (any depth).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValuePath {
    pub segments: Vec<String>,
}

impl ValuePath {
    pub fn expression(&self) -> &str {
        &self.segments[0]
    }

    /// Nested iterator names between the expression and the field.
    pub fn iterator_path(&self) -> &[String] {
        &self.segments[1..self.segments.len() - 1]
    }

    pub fn field(&self) -> &str {
        &self.segments[self.segments.len() - 1]
    }
}

impl fmt::Display for ValuePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Argument {
    Path(ValuePath),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCall {
    pub library: String,
    pub function: String,
    pub args: Vec<Argument>,
}

/// Contents of a `[...]` generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Path(ValuePath),
    Call(FunctionCall),
}

impl Generator {
    /// Every value path the generator reads.
    pub fn paths(&self) -> Vec<&ValuePath> {
        match self {
            Generator::Path(p) => alloc::vec![p],
            Generator::Call(call) => call
                .args
                .iter()
                .filter_map(|a| match a {
                    Argument::Path(p) => Some(p),
                    Argument::Literal(_) => None,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubjectSpec {
    /// `prefix:[generator]`
    Generated { prefix: String, generator: Generator },
    /// `_:label`
    Blank(String),
    /// `prefix:local`
    Fixed(PrefixedName),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// The `a` shorthand for rdf:type.
    Type,
    Named(PrefixedName),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectSpec {
    /// `[generator]` yields literals, `prefix:[generator]` yields IRIs.
    Generated {
        prefix: Option<String>,
        generator: Generator,
    },
    /// `@shapeName`
    ShapeLink(PrefixedName),
    Literal(String),
    Fixed(PrefixedName),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub predicate: Predicate,
    pub object: ObjectSpec,
    pub datatype: Option<PrefixedName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeDecl {
    pub name: PrefixedName,
    pub subject: SubjectSpec,
    pub statements: Vec<Statement>,
}
