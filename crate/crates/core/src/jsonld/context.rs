use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde_json::{Map, Value};

use super::JsonLdError;
use crate::rdf::is_absolute_iri;

const BUNDLED: &str = include_str!("../../data/codemeta-3.0.context.jsonld");

/// URL of the published CodeMeta 3.0 context.
pub const CODEMETA_CONTEXT_URL: &str = "https://w3id.org/codemeta/3.0/";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coercion {
    Id,
    Datatype(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDefinition {
    pub iri: String,
    pub coercion: Option<Coercion>,
    /// `"@container": "@set"`
    pub set: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextSource {
    Bundled,
    File(String),
    Remote(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JsonLdContext {
    terms: BTreeMap<String, TermDefinition>,
    /// keyword → alias, e.g. `@id` → `id`
    aliases: BTreeMap<String, String>,
    vocab: Option<String>,
    source: ContextSource,
    raw: Value,
}

impl JsonLdContext {
    /// The CodeMeta 3.0 context shipped with the crate.
    pub fn bundled() -> Self {
        load_context(BUNDLED, ContextSource::Bundled).expect("bundled context is valid")
    }

    pub fn empty() -> Self {
        JsonLdContext {
            terms: BTreeMap::new(),
            aliases: BTreeMap::new(),
            vocab: None,
            source: ContextSource::Bundled,
            raw: Value::Object(Map::new()),
        }
    }

    pub fn source(&self) -> &ContextSource {
        &self.source
    }

    /// The `@context` value as loaded.
    pub fn raw(&self) -> &Value {
        &self.raw
    }

    pub fn vocab(&self) -> Option<&str> {
        self.vocab.as_deref()
    }

    pub fn term(&self, name: &str) -> Option<&TermDefinition> {
        self.terms.get(name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &TermDefinition)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Key used for a keyword (`@id` or its alias).
    pub fn keyword(&self, keyword: &str) -> String {
        self.aliases
            .get(keyword)
            .cloned()
            .unwrap_or_else(|| keyword.to_string())
    }

    /// Keyword a key stands for, if any.
    pub fn as_keyword<'a>(&'a self, key: &'a str) -> Option<&'a str> {
        if key.starts_with('@') {
            return Some(key);
        }
        self.aliases
            .iter()
            .find(|(_, alias)| alias.as_str() == key)
            .map(|(k, _)| k.as_str())
    }

    /// Shortest form of `iri`: a term, a `@vocab` suffix, a compact IRI,
    /// or the IRI itself.
    pub fn compact_iri(&self, iri: &str) -> Result<String, JsonLdError> {
        let exact: Vec<&str> = self
            .terms
            .iter()
            .filter(|(_, d)| d.iri == iri)
            .map(|(t, _)| t.as_str())
            .collect();
        match exact.len() {
            0 => {}
            1 => return Ok(exact[0].to_string()),
            _ => {
                return Err(JsonLdError::Collision {
                    iri: iri.into(),
                    terms: exact.iter().map(|t| t.to_string()).collect(),
                })
            }
        }
        if let Some(vocab) = &self.vocab {
            if let Some(rest) = iri.strip_prefix(vocab.as_str()) {
                if !rest.is_empty() && !rest.contains(':') && !self.terms.contains_key(rest) && !rest.starts_with('@') {
                    return Ok(rest.into());
                }
            }
        }
        let prefix = self
            .terms
            .iter()
            .filter(|(t, d)| {
                !t.contains(':')
                    && d.coercion.is_none()
                    && is_prefix_iri(&d.iri)
                    && iri.len() > d.iri.len()
                    && iri.starts_with(d.iri.as_str())
                    && !iri[d.iri.len()..].starts_with("//")
            })
            .max_by(|a, b| a.1.iri.len().cmp(&b.1.iri.len()).then(b.0.cmp(a.0)));
        if let Some((term, def)) = prefix {
            let candidate = format!("{term}:{}", &iri[def.iri.len()..]);
            if !self.terms.contains_key(&candidate) {
                return Ok(candidate);
            }
        }
        Ok(iri.into())
    }

    /// Expands a property key or `@type` value.
    pub fn expand_vocab(&self, value: &str) -> Option<String> {
        if let Some(def) = self.terms.get(value) {
            return Some(def.iri.clone());
        }
        if let Some(iri) = self.expand_compact(value) {
            return Some(iri);
        }
        if is_absolute_iri(value) {
            return Some(value.into());
        }
        let vocab = self.vocab.as_ref()?;
        let iri = format!("{vocab}{value}");
        is_absolute_iri(&iri).then_some(iri)
    }

    /// Expands a node identifier; blank labels are returned unchanged.
    pub fn expand_id(&self, value: &str) -> Option<String> {
        if value.starts_with("_:") {
            return Some(value.into());
        }
        if let Some(iri) = self.expand_compact(value) {
            return Some(iri);
        }
        is_absolute_iri(value).then(|| value.into())
    }

    fn expand_compact(&self, value: &str) -> Option<String> {
        let (prefix, suffix) = value.split_once(':')?;
        if suffix.starts_with("//") || prefix == "_" {
            return None;
        }
        let def = self.terms.get(prefix)?;
        let iri = format!("{}{suffix}", def.iri);
        is_absolute_iri(&iri).then_some(iri)
    }
}

fn is_prefix_iri(iri: &str) -> bool {
    iri.ends_with(['/', '#', ':', '?', '[', ']', '@'])
}

/// Parses a context document: either `{"@context": {...}}` or the bare
/// context object.
pub fn load_context(text: &str, source: ContextSource) -> Result<JsonLdContext, JsonLdError> {
    let value: Value = serde_json::from_str(text).map_err(|e| JsonLdError::InvalidContext(format!("{e}")))?;
    context_from_value(&value, source)
}

pub fn context_from_value(value: &Value, source: ContextSource) -> Result<JsonLdContext, JsonLdError> {
    let raw = match value.get("@context") {
        Some(inner) => inner.clone(),
        None => value.clone(),
    };
    let Value::Object(map) = &raw else {
        return Err(JsonLdError::InvalidContext("@context must be an object".into()));
    };
    let mut ctx = JsonLdContext {
        terms: BTreeMap::new(),
        aliases: BTreeMap::new(),
        vocab: None,
        source,
        raw: raw.clone(),
    };
    // keyword aliases and plain prefixes first so definitions can use them
    let mut pending: Vec<(&String, &Value)> = Vec::new();
    for (key, def) in map {
        match (key.as_str(), def) {
            ("@vocab", Value::String(v)) => ctx.vocab = Some(v.clone()),
            ("@vocab", Value::Null) => {}
            ("@version" | "@base" | "@language" | "@protected" | "@propagate" | "@import", _) => {}
            (k, _) if k.starts_with('@') => {
                return Err(JsonLdError::InvalidContext(format!("unsupported keyword {k}")))
            }
            (_, Value::String(s)) if s.starts_with('@') => {
                ctx.aliases.insert(s.clone(), key.clone());
            }
            (_, Value::String(s)) if s.contains("://") => {
                ctx.terms.insert(
                    key.clone(),
                    TermDefinition {
                        iri: s.clone(),
                        coercion: None,
                        set: false,
                    },
                );
            }
            _ => pending.push((key, def)),
        }
    }
    for (key, def) in pending {
        let (id, ty, container) = match def {
            Value::String(s) => (Some(s.as_str()), None, None),
            Value::Object(o) => (
                o.get("@id").and_then(Value::as_str),
                o.get("@type").and_then(Value::as_str),
                o.get("@container").and_then(Value::as_str),
            ),
            Value::Null => continue,
            _ => {
                return Err(JsonLdError::InvalidContext(format!(
                    "term {key}: unsupported definition"
                )))
            }
        };
        let iri = match id {
            Some(id) => ctx.expand_vocab(id),
            None => ctx.expand_vocab(key),
        }
        .ok_or_else(|| JsonLdError::InvalidContext(format!("term {key}: cannot expand its IRI")))?;
        let coercion = match ty {
            None => None,
            Some("@id" | "@vocab") => Some(Coercion::Id),
            Some(t) => Some(Coercion::Datatype(ctx.expand_vocab(t).ok_or_else(|| {
                JsonLdError::InvalidContext(format!("term {key}: cannot expand type {t}"))
            })?)),
        };
        let set = match container {
            None => false,
            Some("@set") => true,
            Some(c) => {
                return Err(JsonLdError::InvalidContext(format!(
                    "term {key}: container {c} is not supported"
                )))
            }
        };
        ctx.terms.insert(key.clone(), TermDefinition { iri, coercion, set });
    }
    Ok(ctx)
}
