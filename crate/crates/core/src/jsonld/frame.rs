use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde_json::{Map, Value};

use super::{Coercion, ContextEmission, FrameOptions, JsonLdContext, JsonLdError, TermDefinition};
use crate::rdf::{RdfGraph, Term};
use crate::vocab::RDF_TYPE;

const SIGNATURE_DEPTH: usize = 8;

/// Frames `g` into nested CodeMeta-style JSON-LD.
///
/// Roots are the nodes of `opts.root_type` that no triple points at. Each
/// node is embedded where the depth-first walk first meets it and
/// referenced by id afterwards. Keys are `@context`, id, type, then the
/// remaining terms alphabetically; single values are written as scalars.
/// Blank nodes only carry an id when referenced more than once. Nodes not
/// reachable from any root are appended as extra top-level entries, so the
/// output re-expands to exactly `g`.
pub fn frame(g: &RdfGraph, ctx: &JsonLdContext, opts: &FrameOptions) -> Result<Value, JsonLdError> {
    let mut references: BTreeMap<&Term, usize> = BTreeMap::new();
    for t in g.iter() {
        if t.object().is_node() {
            *references.entry(t.object()).or_default() += 1;
        }
    }
    let roots: Vec<Term> = g
        .subjects_of_type(&opts.root_type)
        .into_iter()
        .filter(|s| !references.contains_key(s))
        .collect();
    if roots.is_empty() {
        return Err(JsonLdError::NoRoot {
            root_type: opts.root_type.clone(),
        });
    }

    let mut tops = roots.clone();
    let mut reached = BTreeSet::new();
    for r in &roots {
        reach(g, r, &mut reached);
    }
    for s in g.subjects() {
        if !reached.contains(s) {
            tops.push(s.clone());
            reach(g, s, &mut reached);
        }
    }
    let top_set: BTreeSet<&Term> = tops.iter().collect();
    let needs_id: BTreeSet<Term> = g
        .subjects()
        .into_iter()
        .chain(references.keys().copied())
        .filter(|t| matches!(t, Term::Blank(_)))
        .filter(|t| references.get(t).copied().unwrap_or(0) + usize::from(top_set.contains(t)) > 1)
        .cloned()
        .collect();

    let mut framer = Framer {
        g,
        ctx,
        needs_id,
        embedded: BTreeSet::new(),
        labels: BTreeMap::new(),
    };
    let context = match &opts.context_emission {
        ContextEmission::Inline => ctx.raw().clone(),
        ContextEmission::Reference(url) => Value::String(url.clone()),
    };
    let mut docs = Vec::new();
    for top in &tops {
        let body = framer.node(top)?;
        let mut doc = Map::new();
        doc.insert("@context".into(), context.clone());
        doc.extend(body);
        docs.push(Value::Object(doc));
    }
    Ok(if docs.len() == 1 {
        docs.pop().unwrap_or(Value::Null)
    } else {
        Value::Array(docs)
    })
}

fn reach(g: &RdfGraph, start: &Term, seen: &mut BTreeSet<Term>) {
    let mut stack = alloc::vec![start.clone()];
    while let Some(n) = stack.pop() {
        if !seen.insert(n.clone()) {
            continue;
        }
        for t in g.triples_with_subject(&n) {
            if t.object().is_node() && !seen.contains(t.object()) {
                stack.push(t.object().clone());
            }
        }
    }
}

struct Framer<'a> {
    g: &'a RdfGraph,
    ctx: &'a JsonLdContext,
    needs_id: BTreeSet<Term>,
    embedded: BTreeSet<Term>,
    labels: BTreeMap<Term, String>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct SortKey(u8, String, String);

impl Framer<'_> {
    fn id_value(&mut self, node: &Term) -> Option<String> {
        match node {
            Term::Iri(iri) => Some(iri.clone()),
            Term::Blank(_) => {
                if !self.needs_id.contains(node) {
                    return None;
                }
                let next = self.labels.len();
                Some(
                    self.labels
                        .entry(node.clone())
                        .or_insert_with(|| format!("_:b{next}"))
                        .clone(),
                )
            }
            Term::Literal(_) => None,
        }
    }

    fn node(&mut self, node: &Term) -> Result<Map<String, Value>, JsonLdError> {
        self.embedded.insert(node.clone());
        let mut out = Map::new();
        if let Some(id) = self.id_value(node) {
            out.insert(self.ctx.keyword("@id"), Value::String(id));
        }
        let mut types = Vec::new();
        let mut props: BTreeMap<String, (String, Vec<&Term>)> = BTreeMap::new();
        for t in self.g.triples_with_subject(node) {
            match t.object() {
                Term::Iri(ty) if t.predicate_iri() == RDF_TYPE => types.push(self.ctx.compact_iri(ty)?),
                object => {
                    let key = self.ctx.compact_iri(t.predicate_iri())?;
                    props
                        .entry(key)
                        .or_insert_with(|| (t.predicate_iri().into(), Vec::new()))
                        .1
                        .push(object);
                }
            }
        }
        types.sort();
        match types.len() {
            0 => {}
            1 => {
                out.insert(self.ctx.keyword("@type"), Value::String(types.remove(0)));
            }
            _ => {
                out.insert(
                    self.ctx.keyword("@type"),
                    Value::Array(types.into_iter().map(Value::String).collect()),
                );
            }
        }
        for (key, (_, mut values)) in props {
            let def = self.ctx.term(&key).cloned();
            let mut keyed: Vec<(SortKey, &Term)> = values.drain(..).map(|v| (self.sort_key(v), v)).collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let mut json = Vec::with_capacity(keyed.len());
            for (_, v) in keyed {
                json.push(self.value(v, def.as_ref())?);
            }
            let value = if json.len() == 1 && !def.as_ref().is_some_and(|d| d.set) {
                json.pop().unwrap_or(Value::Null)
            } else {
                Value::Array(json)
            };
            out.insert(key, value);
        }
        Ok(out)
    }

    fn value(&mut self, term: &Term, def: Option<&TermDefinition>) -> Result<Value, JsonLdError> {
        let coercion = def.and_then(|d| d.coercion.as_ref());
        if let Some(lit) = term.as_literal() {
            let plain = match (lit.datatype(), coercion) {
                (None, None) => true,
                (Some(dt), Some(Coercion::Datatype(c))) => dt == c,
                _ => false,
            };
            if plain {
                return Ok(Value::String(lit.value().into()));
            }
            let mut m = Map::new();
            m.insert("@value".into(), Value::String(lit.value().into()));
            if let Some(dt) = lit.datatype() {
                m.insert("@type".into(), Value::String(self.ctx.compact_iri(dt)?));
            }
            return Ok(Value::Object(m));
        }
        let has_body = self.g.triples_with_subject(term).next().is_some();
        if self.embedded.contains(term) || (!has_body && matches!(term, Term::Iri(_))) {
            let id = self.id_value(term).unwrap_or_default();
            if coercion == Some(&Coercion::Id) && matches!(term, Term::Iri(_)) {
                return Ok(Value::String(id));
            }
            let mut m = Map::new();
            m.insert(self.ctx.keyword("@id"), Value::String(id));
            return Ok(Value::Object(m));
        }
        Ok(Value::Object(self.node(term)?))
    }

    fn sort_key(&self, term: &Term) -> SortKey {
        match term {
            Term::Blank(_) => SortKey(0, self.signature(term, 0, &mut Vec::new()), String::new()),
            Term::Iri(iri) => SortKey(1, iri.clone(), String::new()),
            Term::Literal(lit) => SortKey(2, lit.value().into(), lit.datatype().unwrap_or("").into()),
        }
    }

    /// Label-independent description of a node's surroundings.
    fn signature(&self, term: &Term, depth: usize, stack: &mut Vec<Term>) -> String {
        match term {
            Term::Iri(iri) => format!("<{iri}>"),
            Term::Literal(lit) => format!("{:?}^^{}", lit.value(), lit.datatype().unwrap_or("")),
            Term::Blank(_) => {
                if depth >= SIGNATURE_DEPTH || stack.contains(term) {
                    return "_".into();
                }
                stack.push(term.clone());
                let mut parts: Vec<String> = self
                    .g
                    .triples_with_subject(term)
                    .map(|t| format!("{} {}", t.predicate_iri(), self.signature(t.object(), depth + 1, stack)))
                    .collect();
                stack.pop();
                parts.sort();
                format!("[{}]", parts.join(";"))
            }
        }
    }
}
