use std::collections::BTreeSet;

use metaforge_core::dsl::*;
use proptest::prelude::*;

const RESERVED: &[&str] = &["a", "MATCHER", "JOIN", "MATCHING", "UNION", "FIELD", "ITERATOR"];

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_-]{0,7}".prop_filter("reserved", |s| !RESERVED.contains(&s.as_str()))
}

fn label() -> impl Strategy<Value = String> {
    prop_oneof![1 => Just(String::new()), 6 => ident().prop_filter("blank node prefix", |s| s != "_")]
}

fn local() -> impl Strategy<Value = String> {
    "[A-Za-z0-9_%-]{0,6}(\\.[A-Za-z0-9_-]{1,4})?".prop_map(|s| if s.starts_with('.') { format!("x{s}") } else { s })
}

fn pname() -> impl Strategy<Value = PrefixedName> {
    (label(), local()).prop_map(|(p, l)| PrefixedName::new(p, l))
}

/// Angle-bracket content: non-empty, no surrounding whitespace.
fn angle() -> impl Strategy<Value = String> {
    "[!-~]([ -~]{0,12}[!-~])?"
}

fn query() -> impl Strategy<Value = String> {
    angle().prop_filter("language tag", |s| {
        let l = s.to_ascii_lowercase();
        !l.starts_with("jsonpath:") && !l.starts_with("xpath:")
    })
}

fn text() -> impl Strategy<Value = String> {
    any::<String>()
}

fn value_path() -> impl Strategy<Value = ValuePath> {
    prop::collection::vec(ident(), 2..5).prop_map(|segments| ValuePath { segments })
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        value_path().prop_map(Generator::Path),
        (
            ident(),
            ident(),
            prop::collection::vec(
                prop_oneof![
                    value_path().prop_map(Argument::Path),
                    text().prop_map(Argument::Literal)
                ],
                0..3
            )
        )
            .prop_map(|(library, function, args)| Generator::Call(FunctionCall {
                library,
                function,
                args
            })),
    ]
}

fn statement() -> impl Strategy<Value = Statement> {
    let predicate = prop_oneof![1 => Just(Predicate::Type), 4 => pname().prop_map(Predicate::Named)];
    let object = prop_oneof![
        (prop::option::of(label()), generator())
            .prop_map(|(prefix, generator)| ObjectSpec::Generated { prefix, generator }),
        pname().prop_map(ObjectSpec::ShapeLink),
        text().prop_map(ObjectSpec::Literal),
        pname().prop_map(ObjectSpec::Fixed),
    ];
    (predicate, object, prop::option::of(pname())).prop_map(|(predicate, object, datatype)| Statement {
        predicate,
        object,
        datatype,
    })
}

fn subject() -> impl Strategy<Value = SubjectSpec> {
    prop_oneof![
        (label(), generator()).prop_map(|(prefix, generator)| SubjectSpec::Generated { prefix, generator }),
        "[a-zA-Z0-9]{1,6}".prop_map(SubjectSpec::Blank),
        pname().prop_map(SubjectSpec::Fixed),
    ]
}

fn iterator(language: QueryLanguage) -> impl Strategy<Value = IteratorDecl> {
    let fields = prop::collection::vec((ident(), query()), 0..4);
    let leaf = (ident(), query(), fields).prop_map(move |(name, root_query, fields)| IteratorDecl {
        name,
        language,
        root_query,
        fields: fields
            .into_iter()
            .map(|(name, query)| FieldDecl { name, query })
            .collect(),
        children: Vec::new(),
    });
    leaf.prop_recursive(2, 8, 3, move |inner| {
        (
            ident(),
            query(),
            prop::collection::vec((ident(), query()), 0..4),
            prop::collection::vec(inner, 0..3),
        )
            .prop_map(move |(name, root_query, fields, children)| IteratorDecl {
                name,
                language,
                root_query,
                fields: fields
                    .into_iter()
                    .map(|(name, query)| FieldDecl { name, query })
                    .collect(),
                children,
            })
    })
    .prop_map(unique_members)
}

/// The parser rejects duplicate member names inside an iterator.
fn unique_members(mut it: IteratorDecl) -> IteratorDecl {
    let mut seen = BTreeSet::new();
    for (i, f) in it.fields.iter_mut().enumerate() {
        if !seen.insert(f.name.clone()) {
            f.name = format!("{}_f{i}", f.name);
            seen.insert(f.name.clone());
        }
    }
    let children = std::mem::take(&mut it.children);
    for (i, mut c) in children.into_iter().enumerate() {
        if !seen.insert(c.name.clone()) {
            c.name = format!("{}_c{i}", c.name);
            seen.insert(c.name.clone());
        }
        it.children.push(unique_members(c));
    }
    it
}

fn document() -> impl Strategy<Value = MappingDocument> {
    let lang = prop_oneof![Just(QueryLanguage::JsonPath), Just(QueryLanguage::XPath)];
    (
        prop::collection::vec((label(), angle()), 0..4),
        prop::collection::vec((ident(), angle()), 0..4),
        prop::collection::vec((ident(), angle()), 0..2),
        prop::collection::vec(lang.prop_flat_map(iterator), 0..3),
        prop::collection::vec((ident(), prop::collection::vec((ident(), ident()), 1..4)), 0..3),
        prop::collection::vec((pname(), subject(), prop::collection::vec(statement(), 0..5)), 0..4),
    )
        .prop_map(
            |(prefixes, sources, functions, iterators, expressions, shapes)| MappingDocument {
                prefixes: prefixes
                    .into_iter()
                    .map(|(label, iri)| PrefixDecl { label, iri })
                    .collect(),
                sources: sources
                    .into_iter()
                    .map(|(name, locator)| SourceDecl { name, locator })
                    .collect(),
                functions: functions
                    .into_iter()
                    .map(|(name, location)| FunctionsDecl { name, location })
                    .collect(),
                iterators,
                expressions: expressions
                    .into_iter()
                    .map(|(name, branches)| ExpressionDecl {
                        name,
                        branches: branches
                            .into_iter()
                            .map(|(source, iterator)| ExpressionBranch { source, iterator })
                            .collect(),
                    })
                    .collect(),
                shapes: shapes
                    .into_iter()
                    .map(|(name, subject, statements)| ShapeDecl {
                        name,
                        subject,
                        statements,
                    })
                    .collect(),
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_documents_parse_back(doc in document()) {
        let text = print_mapping(&doc);
        let parsed = parse_mapping(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(print_mapping(&parsed), text);
    }
}

#[test]
fn reference_mappings_survive_printing() {
    for text in [include_str!("data/github.shexml"), include_str!("data/merged.shexml")] {
        let doc = parse_mapping(text).unwrap();
        assert_eq!(parse_mapping(&print_mapping(&doc)).unwrap(), doc);
    }
}
