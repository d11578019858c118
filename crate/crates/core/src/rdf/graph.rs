use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::term::{Term, TermKind};
use crate::vocab::RDF_TYPE;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(Term),
    #[error("predicate {0} is not an IRI")]
    NonIriPredicate(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, GraphError> {
        if subject.is_literal() {
            return Err(GraphError::LiteralSubject(subject));
        }
        if predicate.kind() != TermKind::Iri {
            return Err(GraphError::NonIriPredicate(predicate));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn predicate_iri(&self) -> &str {
        self.predicate.value()
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Subject text, predicate text, object kind, object text.
impl Ord for Triple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.subject
            .value()
            .cmp(other.subject.value())
            .then_with(|| self.subject.kind().cmp(&other.subject.kind()))
            .then_with(|| self.predicate.value().cmp(other.predicate.value()))
            .then_with(|| self.object.cmp(&other.object))
    }
}

/// A set of triples. Iteration order is the deterministic [`Triple`] order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RdfGraph {
    triples: BTreeSet<Triple>,
}

impl RdfGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set insertion; returns whether the triple was new.
    pub fn add_triple(&mut self, s: Term, p: Term, o: Term) -> Result<bool, GraphError> {
        Ok(self.insert(Triple::new(s, p, o)?))
    }

    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend(&mut self, other: &RdfGraph) {
        self.triples.extend(other.triples.iter().cloned());
    }

    pub fn union(&self, other: &RdfGraph) -> RdfGraph {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn triples_with_subject<'a>(&'a self, s: &'a Term) -> impl Iterator<Item = &'a Triple> {
        self.triples.iter().filter(move |t| &t.subject == s)
    }

    pub fn objects<'a>(&'a self, s: &'a Term, predicate: &'a str) -> impl Iterator<Item = &'a Term> {
        self.triples_with_subject(s)
            .filter(move |t| t.predicate.value() == predicate)
            .map(|t| &t.object)
    }

    pub fn types_of<'a>(&'a self, s: &'a Term) -> impl Iterator<Item = &'a str> {
        self.objects(s, RDF_TYPE).filter_map(Term::as_iri)
    }

    /// Distinct subjects in graph order.
    pub fn subjects(&self) -> Vec<&Term> {
        let mut out: Vec<&Term> = Vec::new();
        for t in &self.triples {
            if out.last() != Some(&&t.subject) && !out.contains(&&t.subject) {
                out.push(&t.subject);
            }
        }
        out
    }

    /// Every `s` with `(s, rdf:type, class)`, sorted by identifier text.
    pub fn subjects_of_type(&self, class_iri: &str) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .triples
            .iter()
            .filter(|t| t.predicate.value() == RDF_TYPE && t.object.as_iri() == Some(class_iri))
            .map(|t| t.subject.clone())
            .collect();
        out.sort_by(|a, b| a.value().cmp(b.value()).then(a.kind().cmp(&b.kind())));
        out.dedup();
        out
    }
}

impl FromIterator<Triple> for RdfGraph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        RdfGraph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a RdfGraph {
    type Item = &'a Triple;
    type IntoIter = alloc::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}
