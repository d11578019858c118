use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde_json::Value;

use super::{JsonStep, NodeHandle, QueryError, QueryValue, QueryValueKind, ValueSet};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Step {
    Key(String),
    Index(usize),
    Filter { key: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct JsonPath {
    absolute: bool,
    steps: Vec<Step>,
}

fn unsupported(query: &str, reason: impl Into<String>) -> QueryError {
    QueryError::Unsupported {
        language: "JSONPath",
        query: query.into(),
        reason: reason.into(),
    }
}

impl JsonPath {
    pub(super) fn parse(query: &str) -> Result<Self, QueryError> {
        let text = query.trim();
        let (absolute, mut rest) = match text.strip_prefix('$') {
            Some(r) => (true, r),
            None => (false, text),
        };
        let mut steps = Vec::new();
        if rest.is_empty() {
            if !absolute {
                return Err(unsupported(query, "empty path"));
            }
            return Ok(JsonPath { absolute, steps });
        }
        let mut expect_key = !absolute;
        loop {
            if expect_key {
                let end = rest.find(['.', '[']).unwrap_or(rest.len());
                let key = rest[..end].trim();
                if key.is_empty() {
                    return Err(if rest.starts_with('.') {
                        unsupported(query, "recursive descent `..`")
                    } else {
                        unsupported(query, "empty key")
                    });
                }
                if key == "*" {
                    return Err(unsupported(query, "wildcard `*`"));
                }
                if key.contains(['(', ')', '@', '?', '\'', '"', ']']) {
                    return Err(unsupported(query, format!("key {key:?}")));
                }
                steps.push(Step::Key(key.into()));
                rest = &rest[end..];
                expect_key = false;
            }
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix('.') {
                rest = r;
                expect_key = true;
            } else if let Some(r) = rest.strip_prefix('[') {
                let close = find_bracket_end(r).ok_or_else(|| unsupported(query, "unclosed `[`"))?;
                steps.push(parse_bracket(query, r[..close].trim())?);
                rest = &r[close + 1..];
            } else {
                return Err(unsupported(query, format!("unexpected text {rest:?}")));
            }
        }
        Ok(JsonPath { absolute, steps })
    }

    pub(super) fn evaluate(&self, root: &Value, context: Option<&NodeHandle>) -> ValueSet {
        let start: (Vec<JsonStep>, &Value) = match context {
            Some(NodeHandle::Json(path)) if !self.absolute => match lookup(root, path) {
                Some(v) => (path.clone(), v),
                None => return ValueSet::default(),
            },
            _ => (Vec::new(), root),
        };
        if self.steps.is_empty() {
            return ValueSet {
                values: alloc::vec![QueryValue {
                    position: position(&start.0),
                    kind: QueryValueKind::Node(NodeHandle::Json(start.0)),
                }],
            };
        }
        let mut current = alloc::vec![start];
        for step in &self.steps {
            let mut next = Vec::new();
            for (path, value) in current {
                apply(step, path, value, &mut next);
            }
            current = next;
        }
        let mut out = ValueSet::default();
        for (path, value) in current {
            emit(path, value, &mut out.values);
        }
        out
    }
}

fn find_bracket_end(s: &str) -> Option<usize> {
    let mut quote: Option<char> = None;
    for (i, c) in s.char_indices() {
        match (quote, c) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, '\'' | '"') => quote = Some(c),
            (None, ']') => return Some(i),
            _ => {}
        }
    }
    None
}

fn unquote(s: &str) -> Option<&str> {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return Some(&s[1..s.len() - 1]);
        }
    }
    None
}

fn parse_bracket(query: &str, inner: &str) -> Result<Step, QueryError> {
    if !inner.is_empty() && inner.bytes().all(|b| b.is_ascii_digit()) {
        return inner
            .parse()
            .map(Step::Index)
            .map_err(|_| unsupported(query, "index out of range"));
    }
    if let Some(key) = unquote(inner) {
        return Ok(Step::Key(key.into()));
    }
    if let Some(filter) = inner.strip_prefix("?(").and_then(|f| f.strip_suffix(')')) {
        let (lhs, rhs) = filter
            .split_once("==")
            .ok_or_else(|| unsupported(query, "filters only support `==`"))?;
        let key = lhs
            .trim()
            .strip_prefix("@.")
            .filter(|k| !k.is_empty() && !k.contains(['.', '[', '(', ' ']))
            .ok_or_else(|| unsupported(query, "filter must compare `@.key`"))?;
        let value = unquote(rhs).ok_or_else(|| unsupported(query, "filter value must be a string"))?;
        return Ok(Step::Filter {
            key: key.into(),
            value: value.into(),
        });
    }
    if inner == "*" {
        return Err(unsupported(query, "wildcard `[*]`"));
    }
    Err(unsupported(query, format!("bracket expression [{inner}]")))
}

fn lookup<'a>(root: &'a Value, path: &[JsonStep]) -> Option<&'a Value> {
    path.iter().try_fold(root, |v, step| match step {
        JsonStep::Key(k) => v.get(k.as_str()),
        JsonStep::Index(i) => v.get(*i),
    })
}

fn push(path: &[JsonStep], step: JsonStep) -> Vec<JsonStep> {
    let mut p = path.to_vec();
    p.push(step);
    p
}

fn apply<'a>(step: &Step, path: Vec<JsonStep>, value: &'a Value, out: &mut Vec<(Vec<JsonStep>, &'a Value)>) {
    match (step, value) {
        (Step::Key(k), Value::Object(map)) => {
            if let Some(v) = map.get(k.as_str()) {
                out.push((push(&path, JsonStep::Key(k.clone())), v));
            }
        }
        (Step::Key(_), Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                apply(step, push(&path, JsonStep::Index(i)), item, out);
            }
        }
        (Step::Index(i), Value::Array(items)) => {
            if let Some(v) = items.get(*i) {
                out.push((push(&path, JsonStep::Index(*i)), v));
            }
        }
        (Step::Filter { .. }, Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                if matches_filter(step, item) {
                    out.push((push(&path, JsonStep::Index(i)), item));
                }
            }
        }
        (Step::Filter { .. }, Value::Object(_)) if matches_filter(step, value) => out.push((path, value)),
        _ => {}
    }
}

fn matches_filter(step: &Step, item: &Value) -> bool {
    let Step::Filter { key, value } = step else {
        return false;
    };
    item.get(key.as_str())
        .and_then(scalar_text)
        .is_some_and(|s| s == *value)
}

/// Text form of a JSON scalar; integral numbers print without a fraction.
pub(super) fn scalar_text(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(number_text(n)),
        _ => None,
    }
}

fn number_text(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        return i.to_string();
    }
    if let Some(u) = n.as_u64() {
        return u.to_string();
    }
    match n.as_f64() {
        Some(f) if f.is_finite() && f.abs() < 9.0e15 && (f as i64) as f64 == f => (f as i64).to_string(),
        _ => n.to_string(),
    }
}

fn position(path: &[JsonStep]) -> String {
    let mut out = String::new();
    for step in path {
        out.push('/');
        match step {
            JsonStep::Key(k) => out.push_str(&k.replace('~', "~0").replace('/', "~1")),
            JsonStep::Index(i) => out.push_str(&i.to_string()),
        }
    }
    out
}

fn emit(path: Vec<JsonStep>, value: &Value, out: &mut Vec<QueryValue>) {
    match value {
        Value::Null => {}
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                emit(push(&path, JsonStep::Index(i)), item, out);
            }
        }
        Value::Object(_) => out.push(QueryValue {
            position: position(&path),
            kind: QueryValueKind::Node(NodeHandle::Json(path)),
        }),
        scalar => out.push(QueryValue {
            position: position(&path),
            kind: QueryValueKind::Scalar(scalar_text(scalar).unwrap_or_default()),
        }),
    }
}
