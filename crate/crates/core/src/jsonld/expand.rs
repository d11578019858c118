use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde_json::{Map, Value};

use super::{Coercion, JsonLdContext, JsonLdError};
use crate::rdf::{RdfGraph, Term, Triple};
use crate::vocab::{RDF_TYPE, XSD};

fn node_ref(term: &Term) -> Value {
    let mut m = Map::new();
    m.insert("@id".into(), Value::String(term.node_id().unwrap_or_default()));
    Value::Object(m)
}

fn value_object(term: &Term) -> Value {
    match term.as_literal() {
        Some(lit) => {
            let mut m = Map::new();
            m.insert("@value".into(), Value::String(lit.value().into()));
            if let Some(dt) = lit.datatype() {
                m.insert("@type".into(), Value::String(dt.into()));
            }
            Value::Object(m)
        }
        None => node_ref(term),
    }
}

/// Flat array of node objects with full IRIs, in subject order.
pub fn serialize_expanded(g: &RdfGraph) -> Value {
    let mut nodes = Vec::new();
    for subject in g.subjects() {
        let mut obj = Map::new();
        obj.insert("@id".into(), Value::String(subject.node_id().unwrap_or_default()));
        let types: Vec<Value> = g.types_of(subject).map(|t| Value::String(t.into())).collect();
        if !types.is_empty() {
            obj.insert("@type".into(), Value::Array(types));
        }
        let mut props: BTreeMap<&str, Vec<Value>> = BTreeMap::new();
        for t in g.triples_with_subject(subject) {
            if t.predicate_iri() == RDF_TYPE && t.object().as_iri().is_some() {
                continue;
            }
            props
                .entry(t.predicate_iri())
                .or_default()
                .push(value_object(t.object()));
        }
        for (p, values) in props {
            obj.insert(p.into(), Value::Array(values));
        }
        nodes.push(Value::Object(obj));
    }
    Value::Array(nodes)
}

/// Reads a flat expanded document (as written by [`serialize_expanded`]).
pub fn parse_expanded(doc: &Value) -> Result<RdfGraph, JsonLdError> {
    expand(doc, &JsonLdContext::empty())
}

/// Expands a compacted or expanded JSON-LD document into triples using
/// `ctx`. Node objects without an identifier get fresh blank nodes.
pub fn expand(doc: &Value, ctx: &JsonLdContext) -> Result<RdfGraph, JsonLdError> {
    let mut labels = BTreeSet::new();
    collect_blank_labels(doc, &mut labels);
    let mut ex = Expander {
        ctx,
        graph: RdfGraph::new(),
        used: labels,
        fresh: 0,
    };
    ex.top(doc)?;
    Ok(ex.graph)
}

fn collect_blank_labels(v: &Value, out: &mut BTreeSet<String>) {
    match v {
        Value::Array(items) => items.iter().for_each(|i| collect_blank_labels(i, out)),
        Value::Object(map) => {
            for (k, val) in map {
                if k == "@context" {
                    continue;
                }
                if let Value::String(s) = val {
                    if let Some(label) = s.strip_prefix("_:") {
                        out.insert(label.into());
                    }
                }
                collect_blank_labels(val, out);
            }
        }
        Value::String(s) => {
            if let Some(label) = s.strip_prefix("_:") {
                out.insert(label.into());
            }
        }
        _ => {}
    }
}

struct Expander<'a> {
    ctx: &'a JsonLdContext,
    graph: RdfGraph,
    used: BTreeSet<String>,
    fresh: usize,
}

fn invalid(msg: impl Into<String>) -> JsonLdError {
    JsonLdError::InvalidDocument(msg.into())
}

impl Expander<'_> {
    fn fresh_blank(&mut self) -> Term {
        loop {
            let label = format!("g{}", self.fresh);
            self.fresh += 1;
            if self.used.insert(label.clone()) {
                return Term::blank(label).expect("generated label is valid");
            }
        }
    }

    fn top(&mut self, doc: &Value) -> Result<(), JsonLdError> {
        match doc {
            Value::Array(items) => items.iter().try_for_each(|i| self.top(i)),
            Value::Object(map) => {
                if let Some(graph) = map.get("@graph") {
                    return match graph {
                        Value::Array(items) => items.iter().try_for_each(|i| self.node(i).map(|_| ())),
                        other => self.node(other).map(|_| ()),
                    };
                }
                self.node(doc).map(|_| ())
            }
            _ => Err(invalid("top level must be an object or an array")),
        }
    }

    fn id_term(&mut self, raw: &str) -> Result<Term, JsonLdError> {
        let id = self
            .ctx
            .expand_id(raw)
            .ok_or_else(|| invalid(format!("identifier {raw:?} is not an absolute IRI")))?;
        match id.strip_prefix("_:") {
            Some(label) => Term::blank(label).map_err(|e| invalid(format!("{e}"))),
            None => Term::iri(id).map_err(|e| invalid(format!("{e}"))),
        }
    }

    fn node(&mut self, v: &Value) -> Result<Term, JsonLdError> {
        let Value::Object(map) = v else {
            return Err(invalid("expected a node object"));
        };
        let mut subject = None;
        for (k, val) in map {
            if self.ctx.as_keyword(k) == Some("@id") {
                let raw = val.as_str().ok_or_else(|| invalid("@id must be a string"))?;
                subject = Some(self.id_term(raw)?);
            }
        }
        let subject = match subject {
            Some(s) => s,
            None => self.fresh_blank(),
        };
        for (key, val) in map {
            match self.ctx.as_keyword(key) {
                Some("@id" | "@context") => {}
                Some("@type") => {
                    for t in as_list(val) {
                        let raw = t.as_str().ok_or_else(|| invalid("@type must be a string"))?;
                        let iri = self
                            .ctx
                            .expand_vocab(raw)
                            .ok_or_else(|| invalid(format!("cannot expand type {raw:?}")))?;
                        self.add(&subject, RDF_TYPE, Term::iri(iri).map_err(|e| invalid(format!("{e}")))?)?;
                    }
                }
                Some(k) => return Err(invalid(format!("unsupported keyword {k} in a node object"))),
                None => {
                    let Some(predicate) = self.ctx.expand_vocab(key) else {
                        continue;
                    };
                    let coercion = self.ctx.term(key).and_then(|d| d.coercion.clone());
                    for item in as_list(val) {
                        if let Some(object) = self.value(item, coercion.as_ref())? {
                            self.add(&subject, &predicate, object)?;
                        }
                    }
                }
            }
        }
        Ok(subject)
    }

    fn value(&mut self, v: &Value, coercion: Option<&Coercion>) -> Result<Option<Term>, JsonLdError> {
        Ok(Some(match v {
            Value::Null => return Ok(None),
            Value::String(s) => match coercion {
                Some(Coercion::Id) => self.id_term(s)?,
                Some(Coercion::Datatype(dt)) => Term::typed_literal(s.as_str(), dt.as_str()),
                None => Term::literal(s.as_str()),
            },
            Value::Bool(b) => Term::typed_literal(b.to_string(), format!("{XSD}boolean")),
            Value::Number(n) => {
                let dt = if n.is_f64() { "double" } else { "integer" };
                Term::typed_literal(n.to_string(), format!("{XSD}{dt}"))
            }
            Value::Array(_) => return Err(invalid("nested arrays are not supported")),
            Value::Object(map) => {
                if let Some(value) = map.get("@value") {
                    let text = match value {
                        Value::String(s) => s.clone(),
                        Value::Null => return Ok(None),
                        other => other.to_string(),
                    };
                    match map.get("@type").and_then(Value::as_str) {
                        Some(t) => {
                            let dt = self
                                .ctx
                                .expand_vocab(t)
                                .ok_or_else(|| invalid(format!("cannot expand datatype {t:?}")))?;
                            Term::typed_literal(text, dt)
                        }
                        None => Term::literal(text),
                    }
                } else {
                    self.node(v)?
                }
            }
        }))
    }

    fn add(&mut self, s: &Term, p: &str, o: Term) -> Result<(), JsonLdError> {
        let p = Term::iri(p).map_err(|e| invalid(format!("{e}")))?;
        let t = Triple::new(s.clone(), p, o).map_err(|e| invalid(format!("{e}")))?;
        self.graph.insert(t);
        Ok(())
    }
}

fn as_list(v: &Value) -> Vec<&Value> {
    match v {
        Value::Array(items) => items.iter().collect(),
        other => alloc::vec![other],
    }
}
