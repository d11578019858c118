use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::Serialize;

use super::schema::{NodeShape, PropertyShape, Severity, ShapeSchema, ValueKind};
use crate::jsonld::{expand, JsonLdContext, JsonLdError};
use crate::rdf::{RdfGraph, Term, Triple};
use crate::vocab::RDF_TYPE;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReportEntry {
    pub focus: String,
    /// Property IRI; empty for node-level constraints.
    pub path: String,
    pub constraint: &'static str,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub conforms: bool,
    pub entries: Vec<ReportEntry>,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.severity == Severity::Warning)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "conforms: {} ({} violation(s), {} warning(s))",
            self.conforms,
            self.violations().count(),
            self.warnings().count()
        );
        for e in &self.entries {
            let severity = match e.severity {
                Severity::Violation => "violation",
                Severity::Warning => "warning",
            };
            let path = if e.path.is_empty() { "-" } else { e.path.as_str() };
            let _ = writeln!(out, "{severity}\t{}\t{path}\t{}: {}", e.focus, e.constraint, e.message);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

fn describe(t: &Term) -> String {
    match t {
        Term::Literal(l) => format!("{:?}", l.value()),
        other => format!("{other}"),
    }
}

/// Checks every node typed with a target class against its shape.
pub fn validate(g: &RdfGraph, schema: &ShapeSchema) -> ValidationReport {
    let mut entries = BTreeSet::new();
    let mut focus_nodes: BTreeSet<Term> = BTreeSet::new();
    for shape in &schema.node_shapes {
        focus_nodes.extend(g.subjects_of_type(&shape.target_class));
    }
    for focus in &focus_nodes {
        let shapes: Vec<&NodeShape> = g.types_of(focus).filter_map(|t| schema.shape_for(t)).collect();
        let known: BTreeSet<&str> = shapes
            .iter()
            .flat_map(|s| s.properties.iter().map(|p| p.path.as_str()))
            .collect();
        let id = focus.node_id().unwrap_or_default();
        for t in g.triples_with_subject(focus) {
            let p = t.predicate_iri();
            if p != RDF_TYPE && !known.contains(p) {
                entries.insert(ReportEntry {
                    focus: id.clone(),
                    path: p.into(),
                    constraint: "unknownProperty",
                    severity: Severity::Warning,
                    message: "property is not described by the schema".into(),
                });
            }
        }
        for shape in shapes {
            check_shape(g, focus, &id, shape, &mut entries);
        }
    }
    let entries: Vec<ReportEntry> = entries.into_iter().collect();
    ValidationReport {
        conforms: !entries.iter().any(|e| e.severity == Severity::Violation),
        entries,
    }
}

fn check_shape(g: &RdfGraph, focus: &Term, id: &str, shape: &NodeShape, out: &mut BTreeSet<ReportEntry>) {
    for prop in &shape.properties {
        let values: Vec<&Term> = g.objects(focus, &prop.path).collect();
        let mut entry = |constraint, severity, message: String| {
            out.insert(ReportEntry {
                focus: id.into(),
                path: prop.path.clone(),
                constraint,
                severity,
                message,
            });
        };
        if let Some(min) = prop.min_count {
            if values.len() < min {
                entry(
                    "minCount",
                    prop.severity,
                    format!("expected at least {min} value(s), found {}", values.len()),
                );
            }
        }
        if let Some(max) = prop.max_count {
            if values.len() > max {
                entry(
                    "maxCount",
                    prop.severity,
                    format!("expected at most {max} value(s), found {}", values.len()),
                );
            }
        }
        if prop.recommended && values.is_empty() {
            entry(
                "recommended",
                Severity::Warning,
                "recommended property is missing".into(),
            );
        }
        for v in values {
            if let Some(problem) = kind_problem(g, prop, v) {
                let constraint = if matches!(prop.kind, ValueKind::OneOf(_)) {
                    "oneOf"
                } else {
                    "kind"
                };
                entry(constraint, prop.severity, problem);
            } else if let (Some(re), Some(lit)) = (&prop.pattern, v.as_literal()) {
                if !re.is_match(lit.value()) {
                    entry(
                        "pattern",
                        prop.severity,
                        format!("{} does not match {}", describe(v), re.as_str()),
                    );
                }
            }
        }
    }
    if !shape.require_one_of.is_empty() {
        let satisfied = shape
            .require_one_of
            .iter()
            .any(|group| group.iter().all(|p| g.objects(focus, p).next().is_some()));
        if !satisfied {
            let groups: Vec<String> = shape.require_one_of.iter().map(|g| g.join(" + ")).collect();
            out.insert(ReportEntry {
                focus: id.into(),
                path: String::new(),
                constraint: "requireOneOf",
                severity: Severity::Violation,
                message: format!("minCount 1 not met by any of: {}", groups.join(" | ")),
            });
        }
    }
}

fn kind_problem(g: &RdfGraph, prop: &PropertyShape, v: &Term) -> Option<String> {
    let ok = match &prop.kind {
        ValueKind::Any => true,
        ValueKind::Literal => v.is_literal(),
        ValueKind::Iri => v.is_node(),
        ValueKind::IriOrLiteral => !matches!(v, Term::Blank(_)),
        ValueKind::NodeOfClass(classes) => v.is_node() && g.types_of(v).any(|t| classes.iter().any(|c| c == t)),
        ValueKind::OneOf(allowed) => v.as_literal().is_some_and(|l| allowed.iter().any(|a| a == l.value())),
    };
    if ok {
        return None;
    }
    Some(match &prop.kind {
        ValueKind::Literal => format!("{} is not a literal", describe(v)),
        ValueKind::Iri => format!("{} is not an IRI or blank node", describe(v)),
        ValueKind::IriOrLiteral => format!("{} is a blank node", describe(v)),
        ValueKind::NodeOfClass(classes) => format!("{} is not a node of class {}", describe(v), classes.join(" or ")),
        ValueKind::OneOf(allowed) => format!("{} is not one of {}", describe(v), allowed.join(", ")),
        ValueKind::Any => String::new(),
    })
}

/// Expands a framed document with `ctx`, then validates it.
pub fn validate_framed(
    doc: &serde_json::Value,
    ctx: &JsonLdContext,
    schema: &ShapeSchema,
) -> Result<ValidationReport, JsonLdError> {
    Ok(validate(&expand(doc, ctx)?, schema))
}

/// A graph differing from the original by one replaced or added triple
/// that breaks exactly one property constraint.
#[derive(Debug, Clone)]
pub struct Mutation {
    pub class: String,
    pub path: String,
    pub focus: Term,
    pub graph: RdfGraph,
}

/// One mutation per constrained (class, path) pair whose class has a
/// node in `g`. The first focus node of the class gets a bad value: its
/// first existing value is replaced, or a new one is added.
pub fn single_triple_mutations(g: &RdfGraph, schema: &ShapeSchema) -> Vec<Mutation> {
    let mut out = Vec::new();
    for shape in &schema.node_shapes {
        let Some(focus) = g.subjects_of_type(&shape.target_class).into_iter().next() else {
            continue;
        };
        for prop in &shape.properties {
            let Some(bad) = bad_value(prop) else { continue };
            let Ok(pred) = Term::iri(prop.path.as_str()) else {
                continue;
            };
            let mut graph = g.clone();
            if let Some(first) = g.objects(&focus, &prop.path).next() {
                if let Ok(t) = Triple::new(focus.clone(), pred.clone(), first.clone()) {
                    graph.remove(&t);
                }
            }
            if let Ok(t) = Triple::new(focus.clone(), pred, bad) {
                graph.insert(t);
            }
            out.push(Mutation {
                class: shape.target_class.clone(),
                path: prop.path.clone(),
                focus: focus.clone(),
                graph,
            });
        }
    }
    out
}

/// Whether the property constrains its values at violation severity.
pub fn is_constrained(prop: &PropertyShape) -> bool {
    prop.severity == Severity::Violation && bad_value(prop).is_some()
}

fn bad_value(prop: &PropertyShape) -> Option<Term> {
    if prop.severity != Severity::Violation {
        return None;
    }
    if prop.pattern.is_some() {
        return Some(Term::literal("22-02-2018"));
    }
    Some(match prop.kind {
        ValueKind::Any => return None,
        ValueKind::Literal => Term::iri("http://example.org/mutant").ok()?,
        ValueKind::IriOrLiteral => Term::blank("mutant").ok()?,
        ValueKind::Iri | ValueKind::NodeOfClass(_) | ValueKind::OneOf(_) => Term::literal("mutant"),
    })
}

impl ShapeSchema {
    /// True when adding values can never create a violation: no
    /// violation-level maxCount, in particular no maxCount 0.
    pub fn is_monotone(&self) -> bool {
        self.node_shapes.iter().all(|s| {
            s.properties
                .iter()
                .all(|p| p.max_count.is_none() || p.severity == Severity::Warning)
        })
    }
}
