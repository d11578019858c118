use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde_json::Value;

use super::{NodeHandle, QueryValueKind, ValueSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Json,
    Xml,
}

impl Format {
    /// `{`/`[` means JSON, `<` means XML, after leading whitespace and a BOM.
    pub fn sniff(body: &[u8]) -> Option<Format> {
        let body = body.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(body);
        match body.iter().find(|b| !b.is_ascii_whitespace())? {
            b'{' | b'[' => Some(Format::Json),
            b'<' => Some(Format::Xml),
            _ => None,
        }
    }

    pub fn from_content_type(content_type: &str) -> Option<Format> {
        let mime = content_type.split(';').next()?.trim().to_ascii_lowercase();
        if mime.ends_with("/json") || mime.ends_with("+json") {
            Some(Format::Json)
        } else if mime.ends_with("/xml") || mime.ends_with("+xml") {
            Some(Format::Xml)
        } else {
            None
        }
    }

    pub fn from_extension(path: &str) -> Option<Format> {
        let path = path.split(['?', '#']).next().unwrap_or(path);
        let ext = path.rsplit_once('.')?.1.to_ascii_lowercase();
        match ext.as_str() {
            "json" | "jsonld" => Some(Format::Json),
            "xml" | "pom" => Some(Format::Xml),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Xml => "xml",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("{origin}: invalid JSON: {message}")]
    Json { origin: String, message: String },
    #[error("{origin}: invalid XML: {message}")]
    Xml { origin: String, message: String },
    #[error("{origin}: cannot determine the document format")]
    UnknownFormat { origin: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JsonStep {
    Key(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNodeKind {
    Document,
    Element { local: String, namespace: Option<String> },
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlNode {
    pub kind: XmlNodeKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Owned XML tree; node 0 is the document node. Comments and processing
/// instructions are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlTree {
    nodes: Vec<XmlNode>,
}

impl XmlTree {
    pub fn parse(text: &str) -> Result<Self, roxmltree::Error> {
        let options = roxmltree::ParsingOptions {
            allow_dtd: true,
            ..Default::default()
        };
        let doc = roxmltree::Document::parse_with_options(text, options)?;
        let mut tree = XmlTree {
            nodes: alloc::vec![XmlNode {
                kind: XmlNodeKind::Document,
                parent: None,
                children: Vec::new(),
            }],
        };
        let mut stack: Vec<(roxmltree::Node<'_, '_>, usize)> = doc
            .root()
            .children()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|n| (n, 0))
            .collect();
        while let Some((node, parent)) = stack.pop() {
            let kind = if node.is_element() {
                XmlNodeKind::Element {
                    local: node.tag_name().name().to_owned(),
                    namespace: node.tag_name().namespace().map(ToOwned::to_owned),
                }
            } else if node.is_text() {
                XmlNodeKind::Text(node.text().unwrap_or_default().to_owned())
            } else {
                continue;
            };
            let id = tree.nodes.len();
            tree.nodes.push(XmlNode {
                kind,
                parent: Some(parent),
                children: Vec::new(),
            });
            tree.nodes[parent].children.push(id);
            let children: Vec<_> = node.children().collect();
            stack.extend(children.into_iter().rev().map(|c| (c, id)));
        }
        Ok(tree)
    }

    pub fn node(&self, id: usize) -> Option<&XmlNode> {
        self.nodes.get(id)
    }

    pub fn root_element(&self) -> Option<usize> {
        self.nodes[0]
            .children
            .iter()
            .copied()
            .find(|&c| matches!(self.nodes[c].kind, XmlNodeKind::Element { .. }))
    }

    /// Concatenated descendant text, trimmed.
    pub fn text_content(&self, id: usize) -> String {
        let mut out = String::new();
        let mut stack = alloc::vec![id];
        while let Some(n) = stack.pop() {
            let Some(node) = self.nodes.get(n) else { continue };
            if let XmlNodeKind::Text(t) = &node.kind {
                out.push_str(t);
            }
            stack.extend(node.children.iter().rev());
        }
        out.trim().into()
    }

    pub fn is_descendant_or_self(&self, node: usize, ancestor: usize) -> bool {
        let mut cur = Some(node);
        while let Some(n) = cur {
            if n == ancestor {
                return true;
            }
            cur = self.nodes.get(n).and_then(|x| x.parent);
        }
        false
    }

    pub fn position(&self, id: usize) -> String {
        let mut parts = Vec::new();
        let mut cur = id;
        while let Some(parent) = self.nodes.get(cur).and_then(|n| n.parent) {
            let idx = self.nodes[parent].children.iter().position(|&c| c == cur).unwrap_or(0);
            parts.push(idx);
            cur = parent;
        }
        let mut out = String::new();
        for idx in parts.iter().rev() {
            out.push('/');
            out.push_str(&alloc::format!("{idx}"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tree {
    Json(Value),
    Xml(XmlTree),
}

/// A parsed source: JSON value or owned XML tree, plus where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDocument {
    origin: String,
    tree: Tree,
}

impl SourceDocument {
    pub fn parse(text: &str, format: Format, origin: impl Into<String>) -> Result<Self, DocumentError> {
        let origin = origin.into();
        let tree = match format {
            Format::Json => Tree::Json(serde_json::from_str(text).map_err(|e| DocumentError::Json {
                origin: origin.clone(),
                message: alloc::format!("{e}"),
            })?),
            Format::Xml => Tree::Xml(XmlTree::parse(text).map_err(|e| DocumentError::Xml {
                origin: origin.clone(),
                message: alloc::format!("{e}"),
            })?),
        };
        Ok(SourceDocument { origin, tree })
    }

    /// Parses with the format sniffed from the leading byte.
    pub fn parse_sniffed(text: &str, origin: impl Into<String>) -> Result<Self, DocumentError> {
        let origin = origin.into();
        match Format::sniff(text.as_bytes()) {
            Some(format) => Self::parse(text, format, origin),
            None => Err(DocumentError::UnknownFormat { origin }),
        }
    }

    pub fn from_json(value: Value, origin: impl Into<String>) -> Self {
        SourceDocument {
            origin: origin.into(),
            tree: Tree::Json(value),
        }
    }

    pub fn format(&self) -> Format {
        match self.tree {
            Tree::Json(_) => Format::Json,
            Tree::Xml(_) => Format::Xml,
        }
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn json(&self) -> Option<&Value> {
        match &self.tree {
            Tree::Json(v) => Some(v),
            Tree::Xml(_) => None,
        }
    }

    pub fn xml(&self) -> Option<&XmlTree> {
        match &self.tree {
            Tree::Xml(t) => Some(t),
            Tree::Json(_) => None,
        }
    }

    /// Leaf values of a result set as text: scalars as-is, XML elements as
    /// their text content. JSON objects carry no scalar and are skipped.
    pub fn scalar_values(&self, set: &ValueSet) -> Vec<String> {
        set.values
            .iter()
            .filter_map(|v| match &v.kind {
                QueryValueKind::Scalar(s) => Some(s.clone()),
                QueryValueKind::Node(NodeHandle::Xml(id)) => self.xml().map(|t| t.text_content(*id)),
                QueryValueKind::Node(NodeHandle::Json(_)) => None,
            })
            .collect()
    }

    /// Whether `node` lies inside `ancestor` (or is it).
    pub fn is_within(&self, node: &NodeHandle, ancestor: &NodeHandle) -> bool {
        match (node, ancestor) {
            (NodeHandle::Json(n), NodeHandle::Json(a)) => n.starts_with(a),
            (NodeHandle::Xml(n), NodeHandle::Xml(a)) => self.xml().is_some_and(|t| t.is_descendant_or_self(*n, *a)),
            _ => false,
        }
    }
}
