//! Acceptance checks. Prints one line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use metaforge_core::crosswalks::{check_coverage, list_crosswalk_coverage, CrosswalkTemplate, Params, TemplateId};
use metaforge_core::dsl::{parse_mapping, resolve_references};
use metaforge_core::jsonld::{frame, unframe, FrameOptions, JsonLdContext};
use metaforge_core::rdf::{isomorphic, parse_ntriples, RdfGraph};
use metaforge_core::shapes::{is_constrained, single_triple_mutations, validate, validate_framed, ShapeSchema};
use metaforge_core::testkit::random_graph;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Check = Result<(), String>;
type Criterion<'a> = Box<dyn FnOnce() -> Check + 'a>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixtures(project: &str) -> PathBuf {
    root().join("fixtures").join(project)
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["metaforge"];
    full.extend_from_slice(args);
    let code = metaforge::run(full, None, &mut out, &mut err);
    let mut text = String::from_utf8_lossy(&out).into_owned();
    text.push_str(&String::from_utf8_lossy(&err));
    (code, text)
}

/// Runs the pipeline for a template over a fixture directory into `out`.
fn pipeline(template: &str, project: &str, params: &[&str], out: &Path) -> Result<String, String> {
    let fx = fixtures(project);
    let mut args = vec![
        "pipeline",
        "--template",
        template,
        "--fixtures",
        fx.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    for p in params {
        args.push("--param");
        args.push(p);
    }
    let (code, text) = cli(&args);
    ensure!(code == 0, "pipeline {template} exited {code}: {text}");
    Ok(text)
}

fn read_json(p: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn read_graph(dir: &Path) -> Result<RdfGraph, String> {
    let text = fs::read_to_string(dir.join("codemeta.nt")).map_err(|e| e.to_string())?;
    parse_ntriples(&text).map_err(|e| e.to_string())
}

/// Every key except `@context` must match exactly, and no key may be missing or extra.
fn compare_fields(actual: &Value, expected: &Value, skip: &[&str]) -> Check {
    let a = actual.as_object().ok_or("output is not an object")?;
    let e = expected.as_object().unwrap();
    let ignored = |k: &str| k == "@context" || skip.contains(&k);
    let got: BTreeSet<&str> = a.keys().map(String::as_str).filter(|k| !ignored(k)).collect();
    let want: BTreeSet<&str> = e.keys().map(String::as_str).filter(|k| !ignored(k)).collect();
    ensure!(
        got == want,
        "key sets differ: extra {:?}, missing {:?}",
        got.difference(&want).collect::<Vec<_>>(),
        want.difference(&got).collect::<Vec<_>>()
    );
    ensure!(a.contains_key("@context"), "missing @context");
    for k in want {
        ensure!(a[k] == e[k], "field {k}: got {}, want {}", a[k], e[k]);
    }
    Ok(())
}

fn expected_github() -> Value {
    json!({
        "id": "http://example.org/ShExML",
        "type": "SoftwareSourceCode",
        "author": {
            "id": "https://github.com/herminiogg",
            "type": "Person",
            "name": "herminiogg"
        },
        "codeRepository": "https://github.com/herminiogg/ShExML",
        "dateCreated": "2018-02-22",
        "dateModified": "2025-07-18",
        "description": "A heterogeneous data mapping language based on Shape Expressions",
        "downloadUrl": "https://github.com/herminiogg/ShExML/releases",
        "identifier": "122470958",
        "license": "https://api.github.com/licenses/mit",
        "name": "ShExML",
        "programmingLanguage": "Scala",
        "issueTracker": "https://github.com/herminiogg/ShExML/issues"
    })
}

fn expected_merged() -> Value {
    json!({
        "id": "https://github.com/herminiogg/ShExML",
        "type": "SoftwareSourceCode",
        "applicationCategory": "Computer Science",
        "author": [{
            "type": "Role",
            "roleName": "Main author"
        }, {
            "id": "https://herminiogarcia.com/#me",
            "type": "Person",
            "affiliation": {
                "id": "https://kazernedossin.eu/en",
                "type": "Organization",
                "name": "Kazerne Dossin"
            },
            "email": "herminio.garciagonzalez@kazernedossin.eu",
            "familyName": "García González",
            "givenName": "Herminio",
            "identifier": "https://orcid.org/0000-0001-5590-4857"
        }],
        "codeRepository": "https://github.com/herminiogg/ShExML",
        "contributor": {
            "id": "https://niod.knaw.nl/en/staff/mikebryant",
            "type": "Person",
            "affiliation": {
                "id": "https://niod.knaw.nl/en",
                "type": "Organization",
                "name": "NIOD Institute for War, Holocaust and Genocide Studies"
            },
            "email": "m.bryant@niod.knaw.nl",
            "familyName": "Bryant",
            "givenName": "Mike",
            "identifier": "https://orcid.org/0000-0003-0765-7390"
        },
        "dateCreated": "2018-02-22",
        "dateModified": "2025-09-10",
        "description": "A heterogeneous data mapping language based on Shape Expressions",
        "developmentStatus": "active",
        "downloadUrl": "https://api.github.com/repos/herminiogg/ShExML/downloads",
        "identifier": "https://doi.org/10.5281/zenodo.17092549",
        "license": "https://api.github.com/licenses/mit",
        "name": "ShExML",
        "programmingLanguage": "Scala",
        "releaseNotes": "## What's Changed\r\n- Added a parellelisation option in the RDF conversion. You can decide which parts of the execution you want to run in parallel and the number of threads to be used (or let the engine decide based on you hardware specs).\r\n- Stdin can be used as input for the mapping rules or as a input source.\r\n- Some minor fixes and stability improvements.\r\n\r\n**Full Changelog**: https://github.com/herminiogg/ShExML/compare/v0.5.4...v0.6.0",
        "runtimePlatform": "JVM",
        "softwareRequirements": [],
        "version": "0.6.0",
        "issueTracker": "https://api.github.com/repos/herminiogg/ShExML/issues",
        "referencePublication": "https://doi.org/10.7717/peerj-cs.318"
    })
}

/// Text between `<tag>` and `</tag>`, first occurrence.
fn element<'a>(xml: &'a str, tag: &str) -> Option<&'a str> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let start = xml.find(&open)? + open.len();
    let end = xml[start..].find(&close)? + start;
    Some(xml[start..end].trim())
}

/// (groupId:artifactId, version) of every dependency in the POM, read straight from the file.
fn pom_dependencies(project: &str) -> Result<BTreeSet<(String, String)>, String> {
    let dir = fixtures(project);
    let pom = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .find(|p| p.to_string_lossy().ends_with(".pom.xml"))
        .ok_or("no POM fixture")?;
    let xml = fs::read_to_string(pom).map_err(|e| e.to_string())?;
    let mut deps = BTreeSet::new();
    for chunk in xml.split("<dependency>").skip(1) {
        let body = chunk.split("</dependency>").next().unwrap_or("");
        let group = element(body, "groupId").ok_or("dependency without groupId")?;
        let artifact = element(body, "artifactId").ok_or("dependency without artifactId")?;
        let version = element(body, "version").ok_or("dependency without version")?;
        deps.insert((format!("{group}:{artifact}"), version.to_string()));
    }
    Ok(deps)
}

struct Goldens {
    _dir: tempfile::TempDir,
    github: PathBuf,
    merged: PathBuf,
}

impl Goldens {
    fn new() -> Result<Self, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let github = dir.path().join("github");
        let merged = dir.path().join("merged");
        pipeline("github", "shexml", &[], &github)?;
        pipeline("merged", "shexml", &[], &merged)?;
        Ok(Goldens {
            _dir: dir,
            github,
            merged,
        })
    }
}

fn timed_run(budget: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    f()?;
    let spent = start.elapsed();
    ensure!(spent < budget, "took {spent:?}, budget {budget:?}");
    Ok(())
}

fn github_golden() -> Check {
    timed_run(Duration::from_secs(5), || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        pipeline("github", "shexml", &[], dir.path())?;
        let doc = read_json(&dir.path().join("codemeta.json"))?;
        compare_fields(&doc, &expected_github(), &[])
    })
}

fn merged_golden() -> Check {
    timed_run(Duration::from_secs(10), || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        pipeline("merged", "shexml", &[], dir.path())?;
        let doc = read_json(&dir.path().join("codemeta.json"))?;
        compare_fields(&doc, &expected_merged(), &["softwareRequirements"])?;

        let reqs = doc["softwareRequirements"]
            .as_array()
            .ok_or("softwareRequirements is not an array")?;
        let got: BTreeSet<(String, String)> = reqs
            .iter()
            .map(|r| {
                ensure!(r["type"] == "SoftwareSourceCode", "requirement type {}", r["type"]);
                let field = |k: &str| {
                    r[k].as_str()
                        .map(str::to_string)
                        .ok_or(format!("requirement without {k}: {r}"))
                };
                Ok((field("name")?, field("version")?))
            })
            .collect::<Result<_, String>>()?;
        ensure!(got.len() == reqs.len(), "duplicate requirements");
        let want = pom_dependencies("shexml")?;
        ensure!(!want.is_empty(), "fixture POM has no dependencies");
        ensure!(got == want, "softwareRequirements {got:?}, POM {want:?}");
        Ok(())
    })
}

fn round_trip(g: &RdfGraph, ctx: &JsonLdContext) -> Check {
    let doc = frame(g, ctx, &FrameOptions::default()).map_err(|e| e.to_string())?;
    let back = unframe(&doc, ctx).map_err(|e| e.to_string())?;
    ensure!(isomorphic(g, &back), "not isomorphic after framing: {doc}");
    Ok(())
}

fn framing_round_trip(goldens: &Goldens) -> Check {
    let ctx = JsonLdContext::bundled();
    for dir in [&goldens.github, &goldens.merged] {
        let g = read_graph(dir)?;
        ensure!(!g.is_empty(), "empty golden graph");
        let written = read_json(&dir.join("codemeta.json"))?;
        let back = unframe(&written, &ctx).map_err(|e| e.to_string())?;
        ensure!(
            isomorphic(&g, &back),
            "{}: codemeta.json does not expand to codemeta.nt",
            dir.display()
        );
        round_trip(&g, &ctx)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7461);
    let mut sizes = BTreeSet::new();
    for case in 0..100 {
        let g = random_graph(&mut rng);
        ensure!(g.len() <= 30, "case {case}: {} triples", g.len());
        sizes.insert(g.len());
        round_trip(&g, &ctx).map_err(|e| format!("random case {case}: {e}"))?;
    }
    ensure!(sizes.len() > 5, "random graphs lack variety: sizes {sizes:?}");
    Ok(())
}

fn validation(goldens: &Goldens) -> Check {
    let schema = ShapeSchema::bundled();
    let ctx = JsonLdContext::bundled();
    for dir in [&goldens.github, &goldens.merged] {
        let report = validate(&read_graph(dir)?, &schema);
        ensure!(report.conforms, "{}: {}", dir.display(), report.to_text());
        let framed =
            validate_framed(&read_json(&dir.join("codemeta.json"))?, &ctx, &schema).map_err(|e| e.to_string())?;
        ensure!(framed.conforms, "{}: {}", dir.display(), framed.to_text());
    }
    let g = read_graph(&goldens.merged)?;
    let mutations = single_triple_mutations(&g, &schema);
    let pairs: BTreeSet<(String, String)> = schema
        .node_shapes
        .iter()
        .flat_map(|s| {
            s.properties
                .iter()
                .filter(|p| is_constrained(p))
                .map(move |p| (s.target_class.clone(), p.path.clone()))
        })
        .collect();
    let mutated: BTreeSet<(String, String)> = mutations.iter().map(|m| (m.class.clone(), m.path.clone())).collect();
    ensure!(
        mutated == pairs,
        "mutations miss pairs {:?}",
        pairs.difference(&mutated).collect::<Vec<_>>()
    );
    ensure!(
        mutations.len() == pairs.len(),
        "{} mutations for {} pairs",
        mutations.len(),
        pairs.len()
    );
    for m in &mutations {
        let report = validate(&m.graph, &schema);
        let violations: Vec<_> = report.violations().collect();
        ensure!(
            violations.len() == 1,
            "{} {}: {} violations\n{}",
            m.class,
            m.path,
            violations.len(),
            report.to_text()
        );
        ensure!(
            violations[0].path == m.path,
            "{} {}: violation names {}",
            m.class,
            m.path,
            violations[0].path
        );
    }
    Ok(())
}

fn dmaog_params(include_contributor: bool) -> Params {
    [
        ("repo", "dmaog"),
        (
            "pom_url",
            "https://repo1.maven.org/maven2/com/herminiogarcia/dmaog_3/0.1.2/dmaog_3-0.1.2.pom",
        ),
        ("zenodo_record", "10000001"),
        (
            "include_contributor",
            if include_contributor { "true" } else { "false" },
        ),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

fn retargeting() -> Check {
    let merged = CrosswalkTemplate::get(TemplateId::Merged);
    let inst = |p: &Params| merged.instantiate(&merged.params_with(p)).map_err(|e| e.to_string());
    let shexml = merged
        .instantiate(&merged.default_params())
        .map_err(|e| e.to_string())?;
    let with = inst(&dmaog_params(true))?;
    let without = inst(&dmaog_params(false))?;

    let (a, b): (Vec<&str>, Vec<&str>) = (shexml.lines().collect(), with.lines().collect());
    ensure!(a.len() == b.len(), "parameter change altered the line count");
    let changed: Vec<(&str, &str)> = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| x != y)
        .map(|(x, y)| (*x, *y))
        .collect();
    ensure!(
        !changed.is_empty() && changed.len() <= 6,
        "{} substantive lines changed",
        changed.len()
    );
    let sources = changed.iter().filter(|(x, _)| x.starts_with("SOURCE ")).count();
    ensure!(sources == 4, "{sources} SOURCE lines changed");

    // Without the contributor block the mapping is the same text with lines removed.
    let mut rest = with.lines();
    let mut removed = Vec::new();
    for line in without.lines() {
        loop {
            let next = rest.next().ok_or("contributor removal did more than delete lines")?;
            if next == line {
                break;
            }
            removed.push(next);
        }
    }
    removed.extend(rest);
    ensure!(!removed.is_empty(), "nothing removed");
    // Allowed: the link to the contributor shape, and whole shape blocks for
    // the contributor and the organisation only it points to.
    let mut in_block = false;
    for line in &removed {
        if in_block {
            in_block = line.trim() != "}";
        } else if line.starts_with("ex:Contributor ") || line.starts_with("ex:NIOD ") {
            in_block = true;
        } else {
            ensure!(
                line.trim().is_empty() || line.contains("@ex:Contributor"),
                "removed line outside the contributor block: {line:?}"
            );
        }
    }
    ensure!(!in_block, "contributor block only partly removed");
    ensure!(
        !without.contains("ex:NIOD"),
        "dangling reference to the contributor's organisation"
    );

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline(
        "merged",
        "dmaog",
        &[
            "repo=dmaog",
            "pom_url=https://repo1.maven.org/maven2/com/herminiogarcia/dmaog_3/0.1.2/dmaog_3-0.1.2.pom",
            "zenodo_record=10000001",
            "include_contributor=false",
        ],
        dir.path(),
    )?;
    let doc = read_json(&dir.path().join("codemeta.json"))?;
    ensure!(doc["id"] == "https://github.com/herminiogg/dmaog", "id {}", doc["id"]);
    ensure!(doc["name"] == "dmaog", "name {}", doc["name"]);
    ensure!(doc.get("contributor").is_none(), "contributor still present");
    let report =
        validate_framed(&doc, &JsonLdContext::bundled(), &ShapeSchema::bundled()).map_err(|e| e.to_string())?;
    ensure!(report.conforms, "{}", report.to_text());
    Ok(())
}

const OUTPUTS: [&str; 3] = ["codemeta.json", "codemeta.expanded.jsonld", "codemeta.nt"];

fn snapshot(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    OUTPUTS
        .iter()
        .map(|f| fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}")))
        .collect()
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = pipeline("merged", "shexml", &[], dir.path())?;
    ensure!(first.contains("status: changed"), "first run: {first}");
    let a = snapshot(dir.path())?;
    let second = pipeline("merged", "shexml", &[], dir.path())?;
    ensure!(second.contains("status: unchanged"), "second run: {second}");
    let b = snapshot(dir.path())?;
    for (i, f) in OUTPUTS.iter().enumerate() {
        ensure!(a[i] == b[i], "{f} changed between runs");
    }
    let other = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline("merged", "shexml", &[], other.path())?;
    ensure!(
        snapshot(other.path())? == a,
        "a fresh output directory got different bytes"
    );
    Ok(())
}

const TOKENS: &[&str] = &[
    "PREFIX ",
    "SOURCE ",
    "ITERATOR ",
    "EXPRESSION ",
    "FIELD ",
    "PUSHED_FIELD ",
    "POPPED_FIELD ",
    "FUNCTIONS ",
    "MATCHER ",
    "AS ",
    "UNION ",
    "JOIN ",
    "IF ",
    "<",
    ">",
    "{",
    "}",
    "[",
    "]",
    "(",
    ")",
    ":",
    "@",
    ";",
    ".",
    ",",
    "+",
    "\"",
    "'",
    "$.",
    "node()",
    "local-name(.)",
    "_:",
    "xpath:",
    "jsonpath:",
    "file:",
    "https://",
    "\n",
    " ",
    "\t",
    "\\",
    "%",
    "é",
    "\u{0}",
    "😀",
    "ex:",
    "schema:",
    "a ",
];

fn mutate(base: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = base.chars().collect();
    let pick = |rng: &mut ChaCha8Rng, n: usize| if n == 0 { 0 } else { (rng.next_u32() as usize) % n };
    let ops = 1 + pick(rng, 4);
    for _ in 0..ops {
        let len = chars.len();
        let at = pick(rng, len + 1);
        let span = 1 + pick(rng, 40);
        let end = (at + span).min(len);
        match pick(rng, 6) {
            0 => {
                chars.drain(at..end);
            }
            1 => {
                let copy: Vec<char> = chars[at..end].to_vec();
                let to = pick(rng, len + 1);
                chars.splice(to..to, copy);
            }
            2 => {
                let t = TOKENS[pick(rng, TOKENS.len())];
                chars.splice(at..at, t.chars());
            }
            3 if at < len => {
                chars[at] = TOKENS[pick(rng, TOKENS.len())].chars().next().unwrap_or(' ');
            }
            4 => chars.truncate(at),
            _ => {
                let other = pick(rng, len + 1);
                let (x, y) = (at.min(other), at.max(other));
                if x < y {
                    chars[x..y].reverse();
                }
            }
        }
    }
    chars.into_iter().collect()
}

fn parser_robustness() -> Check {
    timed_run(Duration::from_secs(60), || {
        let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data");
        let mut bases = Vec::new();
        for name in ["github.shexml", "merged.shexml"] {
            let text = fs::read_to_string(data.join(name)).map_err(|e| format!("{name}: {e}"))?;
            let doc = parse_mapping(&text).map_err(|e| format!("{name}: {e}"))?;
            resolve_references(doc).map_err(|e| format!("{name}: {e}"))?;
            bases.push(text);
        }
        for t in TemplateId::ALL {
            let tpl = CrosswalkTemplate::get(t);
            bases.push(tpl.instantiate(&tpl.default_params()).map_err(|e| e.to_string())?);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x7061_7273);
        let hook = panic::take_hook();
        panic::set_hook(Box::new(|_| {}));
        let mut outcome = Ok(());
        let (mut accepted, mut rejected) = (0usize, 0usize);
        for case in 0..10_000 {
            let base = &bases[case % bases.len()];
            let text = mutate(base, &mut rng);
            let result = panic::catch_unwind(AssertUnwindSafe(|| match parse_mapping(&text) {
                Ok(doc) => {
                    let _ = resolve_references(doc);
                    true
                }
                Err(_) => false,
            }));
            match result {
                Ok(true) => accepted += 1,
                Ok(false) => rejected += 1,
                Err(_) => {
                    outcome = Err(format!("case {case} panicked on input:\n{text}"));
                    break;
                }
            }
        }
        panic::set_hook(hook);
        outcome?;
        ensure!(
            accepted > 0 && rejected > 0,
            "fuzz corpus is degenerate: {accepted} accepted, {rejected} rejected"
        );
        Ok(())
    })
}

fn coverage() -> Check {
    let rows = list_crosswalk_coverage();
    ensure!(!rows.is_empty(), "empty coverage table");
    for id in TemplateId::ALL {
        ensure!(rows.iter().any(|r| r.template == id), "no rows for {id}");
        let report = check_coverage(id).map_err(|e| e.to_string())?;
        ensure!(
            report.unmatched_rows.is_empty(),
            "{id}: unmatched rows {:?}",
            report.unmatched_rows
        );
        ensure!(
            report.unmatched_statements.is_empty(),
            "{id}: unmatched statements {:?}",
            report.unmatched_statements
        );
        ensure!(report.is_bijection(), "{id}: not a bijection");
    }
    Ok(())
}

fn main() -> ExitCode {
    let goldens = Goldens::new();
    let with_goldens = |f: fn(&Goldens) -> Check| -> Criterion {
        match &goldens {
            Ok(g) => Box::new(move || f(g)),
            Err(e) => {
                let e = e.clone();
                Box::new(move || Err(format!("golden outputs unavailable: {e}")))
            }
        }
    };
    let criteria: Vec<(&str, Criterion)> = vec![
        ("github crosswalk golden", Box::new(github_golden)),
        ("merged mapping golden", Box::new(merged_golden)),
        ("framing round trip", with_goldens(framing_round_trip)),
        ("validation and mutation suite", with_goldens(validation)),
        ("retargeting", Box::new(retargeting)),
        ("determinism", Box::new(determinism)),
        ("parser robustness", Box::new(parser_robustness)),
        ("crosswalk coverage", Box::new(coverage)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {}: PASS {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL {name} ({secs:.2}s)\n    {}",
                    i + 1,
                    e.replace('\n', "\n    ")
                );
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
