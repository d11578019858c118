use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use regex::Regex;
use serde::Deserialize;

const BUNDLED: &str = include_str!("../../data/codemeta-3.0.shapes.json");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("invalid shape schema: {0}")]
    Json(String),
    #[error("cannot expand {0:?}: unknown prefix")]
    UnknownPrefix(String),
    #[error("duplicate target class <{0}>")]
    DuplicateTarget(String),
    #[error("<{class}> <{path}>: {message}")]
    Property {
        class: String,
        path: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Violation,
}

/// Allowed shape of each value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueKind {
    Any,
    Literal,
    /// IRI or blank node.
    Iri,
    /// IRI or literal, not a blank node.
    IriOrLiteral,
    /// IRI or blank node typed with one of the classes.
    NodeOfClass(Vec<String>),
    /// Literal whose text is one of the values.
    OneOf(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct PropertyShape {
    pub path: String,
    pub kind: ValueKind,
    pub pattern: Option<Regex>,
    pub min_count: Option<usize>,
    pub max_count: Option<usize>,
    pub severity: Severity,
    /// Missing values are reported as warnings.
    pub recommended: bool,
}

impl PartialEq for PropertyShape {
    fn eq(&self, other: &Self) -> bool {
        self.path == other.path
            && self.kind == other.kind
            && self.pattern.as_ref().map(Regex::as_str) == other.pattern.as_ref().map(Regex::as_str)
            && self.min_count == other.min_count
            && self.max_count == other.max_count
            && self.severity == other.severity
            && self.recommended == other.recommended
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeShape {
    pub target_class: String,
    pub properties: Vec<PropertyShape>,
    /// At least one group must have every path present.
    pub require_one_of: Vec<Vec<String>>,
}

impl NodeShape {
    pub fn property(&self, path: &str) -> Option<&PropertyShape> {
        self.properties.iter().find(|p| p.path == path)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSchema {
    pub node_shapes: Vec<NodeShape>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawSchema {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    node_shapes: Vec<RawNodeShape>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawNodeShape {
    target_class: String,
    #[serde(default)]
    properties: Vec<RawProperty>,
    #[serde(default)]
    require_one_of: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawProperty {
    path: String,
    #[serde(default = "any_kind")]
    kind: RawKind,
    pattern: Option<String>,
    min_count: Option<usize>,
    max_count: Option<usize>,
    #[serde(default = "violation")]
    severity: Severity,
    #[serde(default)]
    recommended: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawKind {
    Simple(String),
    Complex(RawComplexKind),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
enum RawComplexKind {
    NodeOfClass(Vec<String>),
    OneOf(Vec<String>),
}

fn any_kind() -> RawKind {
    RawKind::Simple("any".into())
}

fn violation() -> Severity {
    Severity::Violation
}

fn expand(prefixes: &BTreeMap<String, String>, name: &str) -> Result<String, SchemaError> {
    if name.contains("://") {
        return Ok(name.into());
    }
    let (prefix, local) = name
        .split_once(':')
        .ok_or_else(|| SchemaError::UnknownPrefix(name.into()))?;
    prefixes
        .get(prefix)
        .map(|iri| format!("{iri}{local}"))
        .ok_or_else(|| SchemaError::UnknownPrefix(name.into()))
}

pub fn load_shape_schema(text: &str) -> Result<ShapeSchema, SchemaError> {
    let raw: RawSchema = serde_json::from_str(text).map_err(|e| SchemaError::Json(format!("{e}")))?;
    let mut seen = BTreeSet::new();
    let mut node_shapes = Vec::new();
    for shape in raw.node_shapes {
        let target_class = expand(&raw.prefixes, &shape.target_class)?;
        if !seen.insert(target_class.clone()) {
            return Err(SchemaError::DuplicateTarget(target_class));
        }
        let mut properties = Vec::new();
        for p in shape.properties {
            let path = expand(&raw.prefixes, &p.path)?;
            let fail = |message: String| SchemaError::Property {
                class: target_class.clone(),
                path: path.clone(),
                message,
            };
            let kind = match p.kind {
                RawKind::Simple(s) => match s.as_str() {
                    "any" => ValueKind::Any,
                    "literal" => ValueKind::Literal,
                    "iri" => ValueKind::Iri,
                    "iriOrLiteral" => ValueKind::IriOrLiteral,
                    other => return Err(fail(format!("unknown kind {other:?}"))),
                },
                RawKind::Complex(RawComplexKind::NodeOfClass(classes)) => ValueKind::NodeOfClass(
                    classes
                        .iter()
                        .map(|c| expand(&raw.prefixes, c))
                        .collect::<Result<_, _>>()?,
                ),
                RawKind::Complex(RawComplexKind::OneOf(values)) => ValueKind::OneOf(values),
            };
            if let (Some(min), Some(max)) = (p.min_count, p.max_count) {
                if min > max {
                    return Err(fail(format!("minCount {min} exceeds maxCount {max}")));
                }
            }
            let pattern = p
                .pattern
                .map(|re| Regex::new(&re).map_err(|e| fail(format!("bad pattern: {e}"))))
                .transpose()?;
            properties.push(PropertyShape {
                path,
                kind,
                pattern,
                min_count: p.min_count,
                max_count: p.max_count,
                severity: p.severity,
                recommended: p.recommended,
            });
        }
        let require_one_of = shape
            .require_one_of
            .iter()
            .map(|group| group.iter().map(|n| expand(&raw.prefixes, n)).collect())
            .collect::<Result<_, _>>()?;
        node_shapes.push(NodeShape {
            target_class,
            properties,
            require_one_of,
        });
    }
    Ok(ShapeSchema { node_shapes })
}

impl ShapeSchema {
    /// The CodeMeta 3.0 schema shipped with the crate.
    pub fn bundled() -> Self {
        load_shape_schema(BUNDLED).expect("bundled shape schema is valid")
    }

    pub fn shape_for(&self, class: &str) -> Option<&NodeShape> {
        self.node_shapes.iter().find(|s| s.target_class == class)
    }
}
