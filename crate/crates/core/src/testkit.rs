//! Random graph generator for property tests and the acceptance harness.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::rdf::{RdfGraph, Term};
use crate::vocab::{RDF_TYPE, SCHEMA, SOFTWARE_SOURCE_CODE, XSD_DATE};

fn iri(s: &str) -> Term {
    Term::iri(s).unwrap()
}

/// Tree below a typed root plus up to two extra edges to existing nodes.
pub fn random_graph(rng: &mut impl Rng) -> RdfGraph {
    let properties = [
        format!("{SCHEMA}author"),
        format!("{SCHEMA}contributor"),
        format!("{SCHEMA}affiliation"),
        format!("{SCHEMA}name"),
        format!("{SCHEMA}dateCreated"),
        format!("{SCHEMA}keywords"),
        format!("{SCHEMA}somethingElse"),
        "https://w3id.org/codemeta/3.0/issueTracker".into(),
        "http://example.org/vocab/p".into(),
    ];
    let classes = [
        format!("{SCHEMA}Person"),
        format!("{SCHEMA}Organization"),
        format!("{SCHEMA}Role"),
        "http://example.org/vocab/Thing".into(),
    ];
    let mut g = RdfGraph::new();
    let mut nodes: Vec<Term> = Vec::new();
    let root = if rng.gen_bool(0.8) {
        iri("http://example.org/root")
    } else {
        Term::blank("root").unwrap()
    };
    g.add_triple(root.clone(), iri(RDF_TYPE), iri(SOFTWARE_SOURCE_CODE))
        .unwrap();
    nodes.push(root);
    let budget = rng.gen_range(1..=27);
    let mut count = 1;
    while count < budget {
        let parent = nodes[rng.gen_range(0..nodes.len())].clone();
        let p = iri(&properties[rng.gen_range(0..properties.len())]);
        let object = match rng.gen_range(0..6) {
            0 | 1 => {
                let child = if rng.gen_bool(0.5) {
                    iri(&format!("http://example.org/n{}", nodes.len()))
                } else {
                    Term::blank(format!("n{}", nodes.len())).unwrap()
                };
                if rng.gen_bool(0.7) {
                    let c = iri(&classes[rng.gen_range(0..classes.len())]);
                    g.add_triple(child.clone(), iri(RDF_TYPE), c).unwrap();
                    count += 1;
                }
                nodes.push(child.clone());
                child
            }
            2 => Term::typed_literal(
                format!("20{:02}-01-0{}", rng.gen_range(0..30), rng.gen_range(1..9)),
                XSD_DATE,
            ),
            3 => Term::typed_literal(
                format!("{}", rng.gen_range(0..100)),
                "http://www.w3.org/2001/XMLSchema#integer",
            ),
            4 => iri(&format!("http://example.org/leaf{}", rng.gen_range(0..5))),
            _ => Term::literal(format!("v{} \"q\"\n", rng.gen_range(0..10))),
        };
        if g.add_triple(parent, p, object).unwrap() {
            count += 1;
        }
    }
    let shared = rng.gen_range(0..=2);
    for _ in 0..shared {
        if nodes.len() < 3 {
            break;
        }
        let from = nodes[rng.gen_range(0..nodes.len())].clone();
        let to = nodes[rng.gen_range(1..nodes.len())].clone();
        let p = iri(&properties[rng.gen_range(0..3)]);
        let _ = g.add_triple(from, p, to);
    }
    g
}
