use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use serde_json::{json, Value};

use super::*;
use crate::engine::generate;
use crate::query::{Format, SourceDocument};
use crate::rdf::{isomorphic, RdfGraph, Term, Triple};
use crate::vocab::{RDF_TYPE, SCHEMA};

const GITHUB_MAPPING: &str = include_str!("../../tests/data/github.shexml");
const MERGED_MAPPING: &str = include_str!("../../tests/data/merged.shexml");
const FIX: &str = "../../../../fixtures/shexml/";
const GH_REPO: &str = include_str!("../../../../fixtures/shexml/api.github.com_repos_herminiogg_ShExML.json");
const GH_RELEASES: &str =
    include_str!("../../../../fixtures/shexml/api.github.com_repos_herminiogg_ShExML_releases.json");
const POM: &str = include_str!(
    "../../../../fixtures/shexml/repo1.maven.org_maven2_com_herminiogarcia_shexml_3_0.6.0_shexml_3-0.6.0.pom.xml"
);
const ZENODO: &str = include_str!("../../../../fixtures/shexml/zenodo.org_api_records_17092549.json");

fn github_graph() -> RdfGraph {
    let mut docs = BTreeMap::new();
    docs.insert(
        "repo_info".to_string(),
        SourceDocument::parse(GH_REPO, Format::Json, FIX).unwrap(),
    );
    generate(GITHUB_MAPPING, &docs).unwrap().graph
}

fn merged_graph() -> RdfGraph {
    let mut docs = BTreeMap::new();
    let p = |t: &str, f| SourceDocument::parse(t, f, FIX).unwrap();
    docs.insert("gh_info".to_string(), p(GH_REPO, Format::Json));
    docs.insert("gh_releases".to_string(), p(GH_RELEASES, Format::Json));
    docs.insert("maven_info".to_string(), p(POM, Format::Xml));
    docs.insert("zenodo_record".to_string(), p(ZENODO, Format::Json));
    generate(MERGED_MAPPING, &docs).unwrap().graph
}

fn framed(g: &RdfGraph) -> Value {
    frame(g, &JsonLdContext::bundled(), &FrameOptions::default()).unwrap()
}

fn iri(s: &str) -> Term {
    Term::iri(s).unwrap()
}

#[test]
fn expanded_form() {
    assert_eq!(serialize_expanded(&RdfGraph::new()), json!([]));
    let mut g = RdfGraph::new();
    g.add_triple(iri("http://e/x"), iri(RDF_TYPE), iri("http://e/T"))
        .unwrap();
    assert_eq!(
        serialize_expanded(&g),
        json!([{"@id": "http://e/x", "@type": ["http://e/T"]}])
    );

    let g = merged_graph();
    let expanded = serialize_expanded(&g);
    assert!(expanded
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n["@id"] == "https://github.com/herminiogg/ShExML"));
    assert_eq!(parse_expanded(&expanded).unwrap(), g);
}

#[test]
fn github_author_is_embedded() {
    let doc = framed(&github_graph());
    assert_eq!(
        doc["author"],
        json!({"id": "https://github.com/herminiogg", "type": "Person", "name": "herminiogg"})
    );
    assert_eq!(doc["dateCreated"], "2018-02-22");
    assert_eq!(doc["type"], "SoftwareSourceCode");
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys[..3], ["@context", "id", "type"]);
    let mut rest: Vec<&String> = keys[3..].to_vec();
    rest.sort();
    assert_eq!(rest, keys[3..].to_vec());
}

#[test]
fn merged_author_and_contributor() {
    let doc = framed(&merged_graph());
    let authors = doc["author"].as_array().unwrap();
    assert_eq!(authors.len(), 2);
    assert_eq!(authors[0], json!({"type": "Role", "roleName": "Main author"}));
    assert_eq!(authors[1]["id"], "https://herminiogarcia.com/#me");
    assert_eq!(
        authors[1]["affiliation"],
        json!({"id": "https://kazernedossin.eu/en", "type": "Organization", "name": "Kazerne Dossin"})
    );
    assert_eq!(doc["contributor"]["affiliation"]["type"], "Organization");
    assert_eq!(doc["dateModified"], "2025-09-10");
    assert_eq!(doc["softwareRequirements"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_root_is_an_error() {
    let mut g = RdfGraph::new();
    g.add_triple(iri("http://e/x"), iri("http://schema.org/name"), Term::literal("x"))
        .unwrap();
    assert!(matches!(
        frame(&g, &JsonLdContext::bundled(), &FrameOptions::default()),
        Err(JsonLdError::NoRoot { .. })
    ));
}

#[test]
fn context_reference_mode() {
    let opts = FrameOptions {
        context_emission: ContextEmission::Reference(CODEMETA_CONTEXT_URL.into()),
        ..FrameOptions::default()
    };
    let doc = frame(&github_graph(), &JsonLdContext::bundled(), &opts).unwrap();
    assert_eq!(doc["@context"], CODEMETA_CONTEXT_URL);
}

#[test]
fn golden_graphs_round_trip() {
    let ctx = JsonLdContext::bundled();
    for g in [github_graph(), merged_graph()] {
        let doc = framed(&g);
        let back = unframe(&doc, &ctx).unwrap();
        assert!(isomorphic(&g, &back));
        assert_eq!(framed(&back), doc);
    }
}

#[test]
fn several_roots_give_an_array() {
    let mut g = RdfGraph::new();
    for s in ["http://e/a", "http://e/b"] {
        g.add_triple(iri(s), iri(RDF_TYPE), iri(crate::vocab::SOFTWARE_SOURCE_CODE))
            .unwrap();
    }
    let doc = framed(&g);
    let items = doc.as_array().unwrap();
    assert_eq!(items.len(), 2);
    assert!(items.iter().all(|d| d.get("@context").is_some()));
}

#[test]
fn shared_and_cyclic_nodes() {
    let p = |l: &str| iri(&format!("{SCHEMA}{l}"));
    let mut g = RdfGraph::new();
    let root = iri("http://e/root");
    let shared = Term::blank("s").unwrap();
    g.add_triple(root.clone(), iri(RDF_TYPE), iri(crate::vocab::SOFTWARE_SOURCE_CODE))
        .unwrap();
    g.add_triple(root.clone(), p("author"), shared.clone()).unwrap();
    g.add_triple(root.clone(), p("contributor"), shared.clone()).unwrap();
    g.add_triple(shared.clone(), p("name"), Term::literal("n")).unwrap();
    g.add_triple(shared.clone(), p("knows"), iri("http://e/p")).unwrap();
    g.add_triple(iri("http://e/p"), p("knows"), shared.clone()).unwrap();
    let doc = framed(&g);
    assert_eq!(doc["author"]["id"], "_:b0");
    assert_eq!(doc["contributor"], json!({"id": "_:b0"}));
    let back = unframe(&doc, &JsonLdContext::bundled()).unwrap();
    assert!(isomorphic(&g, &back));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
    #[test]
    fn framing_round_trips(seed in proptest::prelude::any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = crate::testkit::random_graph(&mut rng);
        let ctx = JsonLdContext::bundled();
        let doc = frame(&g, &ctx, &FrameOptions::default()).unwrap();
        let back = unframe(&doc, &ctx).unwrap();
        proptest::prop_assert!(isomorphic(&g, &back), "{}", serde_json::to_string_pretty(&doc).unwrap());
        let again = frame(&back, &ctx, &FrameOptions::default()).unwrap();
        proptest::prop_assert_eq!(again, doc);
    }
}

#[test]
fn every_literal_survives() {
    let g = merged_graph();
    let text = serde_json::to_string(&framed(&g)).unwrap();
    for t in g.iter() {
        if let Some(lit) = t.object().as_literal() {
            let encoded = serde_json::to_string(lit.value()).unwrap();
            assert!(text.contains(&encoded), "{encoded}");
        }
    }
    let _ = Triple::new;
}
