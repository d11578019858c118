use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{NodeHandle, QueryError, QueryValue, QueryValueKind, ValueSet, XmlNodeKind, XmlTree};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Test {
    AnyElement,
    Named(String),
    SelfNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Step {
    test: Test,
    local_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct XPath {
    absolute: bool,
    steps: Vec<Step>,
}

fn unsupported(query: &str, reason: impl Into<String>) -> QueryError {
    QueryError::Unsupported {
        language: "XPath",
        query: query.into(),
        reason: reason.into(),
    }
}

fn split_steps(text: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut quote: Option<char> = None;
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match (quote, c) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, '\'' | '"') => quote = Some(c),
            (None, '[') => depth += 1,
            (None, ']') => depth = depth.checked_sub(1)?,
            (None, '/') if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if quote.is_some() || depth != 0 {
        return None;
    }
    parts.push(&text[start..]);
    Some(parts)
}

fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn parse_predicate(query: &str, pred: &str) -> Result<String, QueryError> {
    let compact: String = pred.chars().filter(|c| !c.is_whitespace()).collect();
    let rhs = compact
        .strip_prefix("local-name(.)=")
        .or_else(|| compact.strip_prefix("local-name()="))
        .ok_or_else(|| unsupported(query, format!("predicate [{pred}]")))?;
    let inner = pred.trim();
    let eq = inner.find('=').unwrap_or(0);
    let value = inner[eq + 1..].trim();
    for q in ['\'', '"'] {
        if value.len() >= 2 && value.starts_with(q) && value.ends_with(q) && rhs.starts_with(q) {
            return Ok(value[1..value.len() - 1].into());
        }
    }
    Err(unsupported(query, "local-name() must be compared with a string"))
}

fn parse_step(query: &str, raw: &str) -> Result<Step, QueryError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(unsupported(query, "descendant axis `//`"));
    }
    let (head, predicate) = match raw.find('[') {
        Some(i) => {
            let tail = raw[i + 1..].trim_end();
            let inner = tail
                .strip_suffix(']')
                .ok_or_else(|| unsupported(query, "malformed predicate"))?;
            if inner.contains('[') || inner.contains("][") {
                return Err(unsupported(query, "multiple predicates"));
            }
            (raw[..i].trim(), Some(parse_predicate(query, inner)?))
        }
        None => (raw, None),
    };
    let test = match head {
        "node()" | "*" => Test::AnyElement,
        "." => Test::SelfNode,
        ".." => return Err(unsupported(query, "parent axis `..`")),
        h if h.starts_with('@') => return Err(unsupported(query, "attribute axis")),
        h if h.contains("::") => return Err(unsupported(query, format!("axis in {h:?}"))),
        h if h.ends_with(')') => return Err(unsupported(query, format!("function {h}"))),
        h if h.contains(':') => return Err(unsupported(query, "namespace prefixes; use local-name()")),
        h if is_ncname(h) => Test::Named(h.into()),
        h => return Err(unsupported(query, format!("step {h:?}"))),
    };
    Ok(Step {
        test,
        local_name: predicate,
    })
}

impl XPath {
    pub(super) fn parse(query: &str) -> Result<Self, QueryError> {
        let text = query.trim();
        if text.is_empty() {
            return Err(unsupported(query, "empty path"));
        }
        if text.starts_with("//") {
            return Err(unsupported(query, "descendant axis `//`"));
        }
        let (absolute, body) = match text.strip_prefix('/') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let mut steps = Vec::new();
        if !(absolute && body.trim().is_empty()) {
            let parts = split_steps(body).ok_or_else(|| unsupported(query, "unbalanced brackets or quotes"))?;
            for part in parts {
                steps.push(parse_step(query, part)?);
            }
        }
        Ok(XPath { absolute, steps })
    }

    pub(super) fn evaluate(&self, tree: &XmlTree, context: Option<&NodeHandle>) -> ValueSet {
        let start = match context {
            Some(NodeHandle::Xml(id)) if !self.absolute => *id,
            _ => 0,
        };
        let mut current = alloc::vec![start];
        for step in &self.steps {
            let mut next = Vec::new();
            for id in current {
                match step.test {
                    Test::SelfNode => {
                        if step_matches(tree, id, step, true) {
                            next.push(id);
                        }
                    }
                    _ => {
                        let Some(node) = tree.node(id) else { continue };
                        next.extend(
                            node.children
                                .iter()
                                .copied()
                                .filter(|&c| step_matches(tree, c, step, false)),
                        );
                    }
                }
            }
            current = next;
        }
        ValueSet {
            values: current
                .into_iter()
                .map(|id| QueryValue {
                    position: tree.position(id),
                    kind: QueryValueKind::Node(NodeHandle::Xml(id)),
                })
                .collect(),
        }
    }
}

fn step_matches(tree: &XmlTree, id: usize, step: &Step, self_axis: bool) -> bool {
    let Some(node) = tree.node(id) else { return false };
    let XmlNodeKind::Element { local, namespace } = &node.kind else {
        return self_axis && step.local_name.is_none();
    };
    let test_ok = match &step.test {
        Test::AnyElement | Test::SelfNode => true,
        Test::Named(name) => namespace.is_none() && name == local,
    };
    test_ok && step.local_name.as_ref().is_none_or(|n| n == local)
}
