//! Shape materialization: binding tables to RDF.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::bindings::BindingTable;
use super::functions::apply_function;
use super::Diagnostic;
use crate::dsl::{Argument, Generator, ObjectSpec, Predicate, ResolvedMapping, ShapeDecl, SubjectSpec, ValuePath};
use crate::rdf::{RdfGraph, Term, Triple};
use crate::vocab::RDF_TYPE;

/// Where a shape instance reads its values from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope<'a> {
    /// Every value of every row.
    Global,
    Row {
        table: &'a BindingTable,
        row: usize,
    },
}

#[derive(Debug, Clone)]
struct Instance<'a> {
    subject: Term,
    scope: Scope<'a>,
}

/// Characters kept verbatim in generated IRI local parts besides
/// alphanumerics and non-ASCII.
const KEEP: &[u8] = b"-._~!$&'()*+,;=:@/";

/// Percent-encodes a generated local part so the result is a valid IRI.
pub fn encode_local(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        if !c.is_ascii() || c.is_ascii_alphanumeric() || KEEP.contains(&(c as u8)) {
            if c.is_control() {
                let mut buf = [0u8; 4];
                for b in c.encode_utf8(&mut buf).bytes() {
                    out.push_str(&format!("%{b:02X}"));
                }
            } else {
                out.push(c);
            }
        } else {
            out.push_str(&format!("%{:02X}", c as u32));
        }
    }
    out
}

struct Materializer<'a> {
    mapping: &'a ResolvedMapping,
    tables: &'a BTreeMap<String, BindingTable>,
    diagnostics: Vec<Diagnostic>,
}

pub fn materialize_shapes(
    mapping: &ResolvedMapping,
    tables: &BTreeMap<String, BindingTable>,
) -> (RdfGraph, Vec<Diagnostic>) {
    let mut m = Materializer {
        mapping,
        tables,
        diagnostics: Vec::new(),
    };
    let shapes = &mapping.document().shapes;
    let instances: Vec<Vec<Instance<'_>>> = shapes.iter().map(|s| m.instances(s)).collect();
    let by_name: BTreeMap<String, usize> = shapes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.name.to_string(), i))
        .collect();
    let mut graph = RdfGraph::new();
    for (shape, own) in shapes.iter().zip(&instances) {
        for inst in own {
            for st in &shape.statements {
                let context = format!("shape {}", shape.name);
                let predicate = match &st.predicate {
                    Predicate::Type => RDF_TYPE.to_string(),
                    Predicate::Named(p) => match mapping.expand(p) {
                        Some(iri) => iri,
                        None => continue,
                    },
                };
                let Ok(predicate) = Term::iri(predicate) else {
                    m.warn(&context, format!("invalid predicate IRI for {}", shape.name));
                    continue;
                };
                let datatype = st.datatype.as_ref().and_then(|d| mapping.expand(d));
                let objects: Vec<Term> = match &st.object {
                    ObjectSpec::Literal(text) => alloc::vec![literal(text, datatype.as_deref())],
                    ObjectSpec::Fixed(name) => mapping
                        .expand(name)
                        .and_then(|iri| Term::iri(iri).ok())
                        .into_iter()
                        .collect(),
                    ObjectSpec::Generated { prefix, generator } => {
                        let values = m.generate(generator, inst.scope, &context);
                        match prefix {
                            None => values.iter().map(|v| literal(v, datatype.as_deref())).collect(),
                            Some(p) => values.iter().filter_map(|v| m.iri(p, v, &context)).collect(),
                        }
                    }
                    ObjectSpec::ShapeLink(target) => {
                        let Some(&t) = by_name.get(&target.to_string()) else {
                            continue;
                        };
                        link_targets(inst, &instances[t])
                    }
                };
                for object in objects {
                    if let Ok(triple) = Triple::new(inst.subject.clone(), predicate.clone(), object) {
                        graph.insert(triple);
                    }
                }
            }
        }
    }
    (graph, m.diagnostics)
}

fn literal(value: &str, datatype: Option<&str>) -> Term {
    match datatype {
        Some(dt) => Term::typed_literal(value, dt),
        None => Term::literal(value),
    }
}

/// Target instances reachable from `source`. Instances driven by the same
/// expression are joined through their row lineage; anything else links to
/// every target instance.
fn link_targets(source: &Instance<'_>, targets: &[Instance<'_>]) -> Vec<Term> {
    targets
        .iter()
        .filter(|t| match (source.scope, t.scope) {
            (Scope::Row { table: a, row: ra }, Scope::Row { table: b, row: rb }) if a.expression == b.expression => {
                let level = &b.rows[rb].iterator_path;
                a.scope_rows(ra, level).contains(&rb)
            }
            _ => true,
        })
        .map(|t| t.subject.clone())
        .collect()
}

impl<'a> Materializer<'a> {
    fn warn(&mut self, context: &str, message: String) {
        self.diagnostics.push(Diagnostic {
            context: context.to_string(),
            message,
        });
    }

    fn iri(&mut self, prefix: &str, value: &str, context: &str) -> Option<Term> {
        let base = self.mapping.prefix_iri(prefix)?;
        if value.is_empty() {
            self.warn(context, format!("empty local part for prefix {prefix}"));
            return None;
        }
        match Term::iri(format!("{base}{}", encode_local(value))) {
            Ok(t) => Some(t),
            Err(e) => {
                self.warn(context, format!("{e}"));
                None
            }
        }
    }

    fn path_values(&self, path: &ValuePath, scope: Scope<'_>) -> Vec<String> {
        let Some(table) = self.tables.get(path.expression()) else {
            return Vec::new();
        };
        let values = match scope {
            Scope::Row { table: t, row } if t.expression == table.expression => table.values_in_scope(path, row),
            _ => table.all_values(path),
        };
        values.into_iter().map(String::from).collect()
    }

    /// Generator output; function calls range over the cartesian product of
    /// their arguments, and failing calls are dropped with a warning.
    fn generate(&mut self, generator: &Generator, scope: Scope<'_>, context: &str) -> Vec<String> {
        match generator {
            Generator::Path(p) => self.path_values(p, scope),
            Generator::Call(call) => {
                let args: Vec<Vec<String>> = call
                    .args
                    .iter()
                    .map(|a| match a {
                        Argument::Path(p) => self.path_values(p, scope),
                        Argument::Literal(s) => alloc::vec![s.clone()],
                    })
                    .collect();
                let mut combos: Vec<Vec<&str>> = alloc::vec![Vec::new()];
                for values in &args {
                    combos = combos
                        .iter()
                        .flat_map(|c| {
                            values.iter().map(move |v| {
                                let mut next = c.clone();
                                next.push(v.as_str());
                                next
                            })
                        })
                        .collect();
                }
                let mut out = Vec::new();
                for combo in combos {
                    match apply_function(&call.function, &combo) {
                        Ok(v) => {
                            if !out.contains(&v) {
                                out.push(v);
                            }
                        }
                        Err(e) => self.warn(context, format!("{e}")),
                    }
                }
                out
            }
        }
    }

    fn instances(&mut self, shape: &ShapeDecl) -> Vec<Instance<'a>> {
        let context = format!("shape {}", shape.name);
        match &shape.subject {
            SubjectSpec::Fixed(name) => self
                .mapping
                .expand(name)
                .and_then(|iri| Term::iri(iri).ok())
                .map(|subject| Instance {
                    subject,
                    scope: Scope::Global,
                })
                .into_iter()
                .collect(),
            SubjectSpec::Blank(label) => Term::blank(label.as_str())
                .ok()
                .map(|subject| Instance {
                    subject,
                    scope: Scope::Global,
                })
                .into_iter()
                .collect(),
            SubjectSpec::Generated { prefix, generator } => {
                let paths = generator.paths();
                let Some(first) = paths.first() else {
                    return self
                        .generate(generator, Scope::Global, &context)
                        .iter()
                        .filter_map(|v| self.iri(prefix, v, &context))
                        .map(|subject| Instance {
                            subject,
                            scope: Scope::Global,
                        })
                        .collect();
                };
                let expression = first.expression();
                let level = paths
                    .iter()
                    .filter(|p| p.expression() == expression)
                    .map(|p| p.iterator_path())
                    .max_by_key(|l| l.len())
                    .unwrap_or(&[]);
                let tables = self.tables;
                let Some(table) = tables.get(expression) else {
                    self.warn(&context, format!("expression {expression} was not evaluated"));
                    return Vec::new();
                };
                let mut out = Vec::new();
                let rows: Vec<usize> = table.rows_at(level).map(|r| r.id).collect();
                if rows.is_empty() {
                    self.warn(&context, "no rows provide the subject; shape skipped".into());
                }
                for row in rows {
                    let scope = Scope::Row { table, row };
                    let values = self.generate(generator, scope, &context);
                    if values.is_empty() {
                        let branch = &table.branches[table.rows[row].branch];
                        self.warn(
                            &context,
                            format!("subject generator has no value in a {branch} row; instance skipped"),
                        );
                    }
                    for v in values {
                        if let Some(subject) = self.iri(prefix, &v, &context) {
                            if !out
                                .iter()
                                .any(|i: &Instance<'_>| i.subject == subject && i.scope == scope)
                            {
                                out.push(Instance { subject, scope });
                            }
                        }
                    }
                }
                out
            }
        }
    }
}
