use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use crate::engine::functions;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResolveProblem {
    Duplicate {
        kind: &'static str,
        name: String,
    },
    Unresolved {
        kind: &'static str,
        name: String,
        context: String,
    },
    Arity {
        function: String,
        expected: usize,
        found: usize,
        context: String,
    },
}

impl fmt::Display for ResolveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolveProblem::Duplicate { kind, name } => write!(f, "duplicate {kind} {name:?}"),
            ResolveProblem::Unresolved { kind, name, context } => {
                write!(f, "unresolved {kind} {name:?} in {context}")
            }
            ResolveProblem::Arity {
                function,
                expected,
                found,
                context,
            } => write!(
                f,
                "function {function} takes {expected} argument(s), {found} given in {context}"
            ),
        }
    }
}

/// Every problem found in one pass; resolution never stops at the first.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ResolveError {
    pub problems: Vec<ResolveProblem>,
}

impl ResolveError {
    /// Names of all unresolved references.
    pub fn unresolved_names(&self) -> Vec<&str> {
        self.problems
            .iter()
            .filter_map(|p| match p {
                ResolveProblem::Unresolved { name, .. } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for ResolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} reference problem(s): ", self.problems.len())?;
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ShapeLinkKind {
    /// `predicate @target`
    Predicate(PrefixedName),
    /// A fixed subject IRI of `to` falls inside the generated IRI space of
    /// `from`, so both shapes can describe the same node.
    SharedSubject,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShapeLink {
    pub from: PrefixedName,
    pub to: PrefixedName,
    pub kind: ShapeLinkKind,
}

/// A mapping whose every cross reference is known to resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedMapping {
    document: MappingDocument,
    prefixes: BTreeMap<String, String>,
    links: Vec<ShapeLink>,
}

impl ResolvedMapping {
    pub fn document(&self) -> &MappingDocument {
        &self.document
    }

    pub fn into_document(self) -> MappingDocument {
        self.document
    }

    pub fn prefix_iri(&self, label: &str) -> Option<&str> {
        self.prefixes.get(label).map(String::as_str)
    }

    pub fn expand(&self, name: &PrefixedName) -> Option<String> {
        self.prefix_iri(&name.prefix).map(|iri| format!("{iri}{}", name.local))
    }

    pub fn links(&self) -> &[ShapeLink] {
        &self.links
    }

    pub fn source(&self, name: &str) -> Option<&SourceDecl> {
        self.document.sources.iter().find(|s| s.name == name)
    }

    pub fn iterator(&self, name: &str) -> Option<&IteratorDecl> {
        self.document.iterators.iter().find(|i| i.name == name)
    }

    pub fn expression(&self, name: &str) -> Option<&ExpressionDecl> {
        self.document.expressions.iter().find(|e| e.name == name)
    }

    pub fn shape(&self, name: &PrefixedName) -> Option<&ShapeDecl> {
        self.document.shapes.iter().find(|s| &s.name == name)
    }
}

pub fn resolve_references(doc: MappingDocument) -> Result<ResolvedMapping, ResolveError> {
    let mut problems = BTreeSet::new();

    check_unique(&mut problems, "prefix", doc.prefixes.iter().map(|p| p.label.as_str()));
    check_unique(&mut problems, "source", doc.sources.iter().map(|s| s.name.as_str()));
    check_unique(
        &mut problems,
        "functions",
        doc.functions.iter().map(|f| f.name.as_str()),
    );
    check_unique(&mut problems, "iterator", doc.iterators.iter().map(|i| i.name.as_str()));
    check_unique(
        &mut problems,
        "expression",
        doc.expressions.iter().map(|e| e.name.as_str()),
    );
    let shape_names: Vec<String> = doc.shapes.iter().map(|s| s.name.to_string()).collect();
    check_unique(&mut problems, "shape", shape_names.iter().map(String::as_str));

    let prefixes: BTreeMap<String, String> = doc.prefixes.iter().map(|p| (p.label.clone(), p.iri.clone())).collect();

    for e in &doc.expressions {
        let context = format!("expression {}", e.name);
        for b in &e.branches {
            if !doc.sources.iter().any(|s| s.name == b.source) {
                problems.insert(unresolved("source", &b.source, &context));
            }
            if !doc.iterators.iter().any(|i| i.name == b.iterator) {
                problems.insert(unresolved("iterator", &b.iterator, &context));
            }
        }
    }

    let checker = Checker {
        doc: &doc,
        prefixes: &prefixes,
    };
    for shape in &doc.shapes {
        checker.shape(shape, &mut problems);
    }

    if !problems.is_empty() {
        return Err(ResolveError {
            problems: problems.into_iter().collect(),
        });
    }

    let links = shape_links(&doc, &prefixes);
    Ok(ResolvedMapping {
        document: doc,
        prefixes,
        links,
    })
}

fn unresolved(kind: &'static str, name: &str, context: &str) -> ResolveProblem {
    ResolveProblem::Unresolved {
        kind,
        name: name.to_string(),
        context: context.to_string(),
    }
}

fn check_unique<'a>(problems: &mut BTreeSet<ResolveProblem>, kind: &'static str, names: impl Iterator<Item = &'a str>) {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            problems.insert(ResolveProblem::Duplicate {
                kind,
                name: name.to_string(),
            });
        }
    }
}

struct Checker<'a> {
    doc: &'a MappingDocument,
    prefixes: &'a BTreeMap<String, String>,
}

impl Checker<'_> {
    fn shape(&self, shape: &ShapeDecl, problems: &mut BTreeSet<ResolveProblem>) {
        let context = format!("shape {}", shape.name);
        self.prefix(&shape.name.prefix, &context, problems);
        match &shape.subject {
            SubjectSpec::Generated { prefix, generator } => {
                self.prefix(prefix, &context, problems);
                self.generator(generator, &context, problems);
            }
            SubjectSpec::Blank(_) => {}
            SubjectSpec::Fixed(name) => self.prefix(&name.prefix, &context, problems),
        }
        for st in &shape.statements {
            if let Predicate::Named(p) = &st.predicate {
                self.prefix(&p.prefix, &context, problems);
            }
            if let Some(dt) = &st.datatype {
                self.prefix(&dt.prefix, &context, problems);
            }
            match &st.object {
                ObjectSpec::Generated { prefix, generator } => {
                    if let Some(prefix) = prefix {
                        self.prefix(prefix, &context, problems);
                    }
                    self.generator(generator, &context, problems);
                }
                ObjectSpec::ShapeLink(target) => {
                    if !self.doc.shapes.iter().any(|s| &s.name == target) {
                        problems.insert(unresolved("shape", &target.to_string(), &context));
                    }
                }
                ObjectSpec::Literal(_) => {}
                ObjectSpec::Fixed(name) => self.prefix(&name.prefix, &context, problems),
            }
        }
    }

    fn prefix(&self, label: &str, context: &str, problems: &mut BTreeSet<ResolveProblem>) {
        if !self.prefixes.contains_key(label) {
            problems.insert(unresolved("prefix", label, context));
        }
    }

    fn generator(&self, generator: &Generator, context: &str, problems: &mut BTreeSet<ResolveProblem>) {
        if let Generator::Call(call) = generator {
            if !self.doc.functions.iter().any(|f| f.name == call.library) {
                problems.insert(unresolved("functions", &call.library, context));
            }
            match functions::arity(&call.function) {
                None => {
                    problems.insert(unresolved("function", &call.function, context));
                }
                Some(expected) if expected != call.args.len() => {
                    problems.insert(ResolveProblem::Arity {
                        function: call.function.clone(),
                        expected,
                        found: call.args.len(),
                        context: context.to_string(),
                    });
                }
                Some(_) => {}
            }
        }
        for path in generator.paths() {
            self.path(path, context, problems);
        }
    }

    fn path(&self, path: &ValuePath, context: &str, problems: &mut BTreeSet<ResolveProblem>) {
        let Some(expr) = self.doc.expressions.iter().find(|e| e.name == path.expression()) else {
            problems.insert(unresolved("expression", path.expression(), context));
            return;
        };
        let found = expr.branches.iter().any(|b| {
            self.doc
                .iterators
                .iter()
                .find(|i| i.name == b.iterator)
                .and_then(|it| it.descend(path.iterator_path()))
                .is_some_and(|it| it.field(path.field()).is_some())
        });
        if !found {
            problems.insert(unresolved("field", &path.to_string(), context));
        }
    }
}

fn shape_links(doc: &MappingDocument, prefixes: &BTreeMap<String, String>) -> Vec<ShapeLink> {
    let mut links = BTreeSet::new();
    for shape in &doc.shapes {
        for st in &shape.statements {
            if let (ObjectSpec::ShapeLink(target), Predicate::Named(p)) = (&st.object, &st.predicate) {
                links.insert(ShapeLink {
                    from: shape.name.clone(),
                    to: target.clone(),
                    kind: ShapeLinkKind::Predicate(p.clone()),
                });
            }
        }
    }
    let fixed_iri = |s: &ShapeDecl| match &s.subject {
        SubjectSpec::Fixed(n) => prefixes.get(&n.prefix).map(|iri| format!("{iri}{}", n.local)),
        _ => None,
    };
    for a in &doc.shapes {
        let Some(iri) = fixed_iri(a) else { continue };
        for b in &doc.shapes {
            if a.name == b.name {
                continue;
            }
            let shared = match &b.subject {
                SubjectSpec::Generated { prefix, .. } => prefixes
                    .get(prefix)
                    .is_some_and(|base| iri.len() > base.len() && iri.starts_with(base.as_str())),
                SubjectSpec::Fixed(_) => fixed_iri(b).as_deref() == Some(iri.as_str()) && b.name < a.name,
                SubjectSpec::Blank(_) => false,
            };
            if shared {
                links.insert(ShapeLink {
                    from: b.name.clone(),
                    to: a.name.clone(),
                    kind: ShapeLinkKind::SharedSubject,
                });
            }
        }
    }
    links.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_mapping;

    const GITHUB_MAPPING: &str = include_str!("../../tests/data/github.shexml");
    const MERGED_MAPPING: &str = include_str!("../../tests/data/merged.shexml");

    #[test]
    fn github_crosswalk_resolves_with_author_link() {
        let resolved = resolve_references(parse_mapping(GITHUB_MAPPING).unwrap()).unwrap();
        assert_eq!(
            resolved.links(),
            [ShapeLink {
                from: PrefixedName::new("schema", "SoftwareSourceCode"),
                to: PrefixedName::new("schema", "Person"),
                kind: ShapeLinkKind::Predicate(PrefixedName::new("schema", "author")),
            }]
        );
    }

    #[test]
    fn merged_mapping_has_seven_links() {
        let resolved = resolve_references(parse_mapping(MERGED_MAPPING).unwrap()).unwrap();
        let links = resolved.links();
        assert_eq!(links.len(), 7);
        let mut targets: Vec<String> = links.iter().map(|l| l.to.local.clone()).collect();
        targets.sort();
        assert_eq!(
            targets,
            [
                "Author",
                "AuthorRole",
                "Contributor",
                "Dependency",
                "KD",
                "NIOD",
                "Release"
            ]
        );
        let shared: Vec<_> = links
            .iter()
            .filter(|l| l.kind == ShapeLinkKind::SharedSubject)
            .collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].from, PrefixedName::new("schema", "SoftwareSourceCode"));
        assert_eq!(shared[0].to, PrefixedName::new("ex", "Release"));
    }

    #[test]
    fn undeclared_expression_is_named() {
        let text = "PREFIX ex: <http://e.org/>\nex:S ex:[md.name] { ex:p [md.other] ; }";
        let err = resolve_references(parse_mapping(text).unwrap()).unwrap_err();
        assert!(err.unresolved_names().contains(&"md"));
        assert!(format!("{err}").contains("\"md\""));
    }

    #[test]
    fn problems_are_aggregated() {
        let text = "PREFIX ex: <http://e.org/>\n\
                    SOURCE s <http://e.org/s.json>\n\
                    ITERATOR it <jsonpath: $> { FIELD f <f> }\n\
                    EXPRESSION e <s.it UNION t.missing>\n\
                    ex:S foo:[e.nope] { bar:p @ex:Nothing ; ex:q [h.onlyDate(e.f)] ; }";
        let err = resolve_references(parse_mapping(text).unwrap()).unwrap_err();
        let names = err.unresolved_names();
        for expected in ["t", "missing", "foo", "e.nope", "bar", "ex:Nothing", "h"] {
            assert!(names.contains(&expected), "{expected} missing from {names:?}");
        }
    }

    #[test]
    fn arity_and_unknown_functions() {
        let text = "PREFIX ex: <http://e.org/>\n\
                    SOURCE s <http://e.org/s.json>\n\
                    FUNCTIONS h <scala: f.scala>\n\
                    ITERATOR it <jsonpath: $> { FIELD f <f> }\n\
                    EXPRESSION e <s.it>\n\
                    ex:S ex:x { ex:p [h.onlyDate(e.f, e.f)] ; ex:q [h.shout(e.f)] ; }";
        let err = resolve_references(parse_mapping(text).unwrap()).unwrap_err();
        assert!(err.problems.iter().any(|p| matches!(
            p,
            ResolveProblem::Arity {
                expected: 1,
                found: 2,
                ..
            }
        )));
        assert!(err.unresolved_names().contains(&"shout"));
    }

    #[test]
    fn duplicates_reported() {
        let text = "PREFIX ex: <http://e.org/>\nPREFIX ex: <http://f.org/>\nSOURCE a <x>\nSOURCE a <y>";
        let err = resolve_references(parse_mapping(text).unwrap()).unwrap_err();
        assert_eq!(err.problems.len(), 2);
    }

    #[test]
    fn resolution_is_idempotent() {
        for text in [GITHUB_MAPPING, MERGED_MAPPING] {
            let once = resolve_references(parse_mapping(text).unwrap()).unwrap();
            let twice = resolve_references(once.document().clone()).unwrap();
            assert_eq!(once, twice);
        }
    }
}
