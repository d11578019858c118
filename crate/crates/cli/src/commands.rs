//! The subcommands, independent of argument parsing. Each returns an exit
//! code and writes human output to the given streams.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use metaforge_core::crosswalks::{CrosswalkTemplate, TemplateId};
use metaforge_core::dsl::{parse_mapping, resolve_references};
use metaforge_core::engine::{referenced_sources, Diagnostic, GenerateError};
use metaforge_core::jsonld::{
    context_from_value, expand, load_context, parse_expanded, serialize_expanded, ContextEmission, ContextSource,
    JsonLdError,
};
use metaforge_core::rdf::{parse_ntriples, serialize_ntriples};
use metaforge_core::shapes::{load_shape_schema, ValidationReport};
use metaforge_core::{frame, generate, FrameOptions, JsonLdContext, RdfGraph, ShapeSchema};
use serde_json::{json, Value};

use crate::config::{FrameConfig, MappingSource, Settings};
use crate::output::{self, Change, PlannedFile};
use crate::sources::{is_url, record_fixture, FetchSpec, Fetcher};

pub const FRAMED_FILE: &str = "codemeta.json";
pub const EXPANDED_FILE: &str = "codemeta.expanded.jsonld";
pub const NTRIPLES_FILE: &str = "codemeta.nt";

/// Process exit codes; scripts can branch on the failing stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Bad arguments, configuration or unreadable files.
    Usage = 1,
    Parse = 2,
    Fetch = 3,
    Generate = 4,
    Validation = 5,
    Framing = 6,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn stage(self) -> &'static str {
        match self {
            Exit::Ok => "ok",
            Exit::Usage => "usage",
            Exit::Parse => "parse",
            Exit::Fetch => "fetch",
            Exit::Generate => "generate",
            Exit::Validation => "validate",
            Exit::Framing => "frame",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    pub fn new(exit: Exit, message: impl fmt::Display) -> Self {
        Failure {
            exit,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error [{}]: {}", self.exit.stage(), self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Everything one generation run produces.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub graph: RdfGraph,
    pub framed: Value,
    pub expanded: Value,
    pub ntriples: String,
    pub diagnostics: Vec<Diagnostic>,
    pub context: JsonLdContext,
}

pub fn mapping_text(source: &MappingSource) -> Result<String, Failure> {
    match source {
        MappingSource::Path(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::new(Exit::Parse, format!("cannot read mapping {}: {e}", p.display()))),
        MappingSource::Template { id, params } => {
            let id: TemplateId = id.parse().map_err(|e| Failure::new(Exit::Parse, e))?;
            let t = CrosswalkTemplate::get(id);
            t.instantiate(&t.params_with(params))
                .map_err(|e| Failure::new(Exit::Parse, format!("template {id}: {e}")))
        }
    }
}

pub fn fetcher(settings: &Settings) -> Fetcher {
    Fetcher {
        fixture_dir: settings.fixtures.clone(),
        online: settings.online,
        timeout: settings.timeout,
    }
}

pub fn load_jsonld_context(spec: &str, fetcher: &Fetcher) -> Result<JsonLdContext, Failure> {
    if spec == "bundled" {
        return Ok(JsonLdContext::bundled());
    }
    if is_url(spec) {
        let doc = fetcher
            .fetch(&FetchSpec::new(spec))
            .map_err(|e| Failure::new(Exit::Fetch, format!("context: {e}")))?;
        let value = doc
            .json()
            .ok_or_else(|| Failure::new(Exit::Framing, format!("context {spec} is not JSON")))?;
        return context_from_value(value, ContextSource::Remote(spec.into()))
            .map_err(|e| Failure::new(Exit::Framing, e));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Failure::new(Exit::Usage, format!("context {spec}: {e}")))?;
    load_context(&text, ContextSource::File(spec.into())).map_err(|e| Failure::new(Exit::Framing, e))
}

pub fn load_schema(path: Option<&Path>) -> Result<ShapeSchema, Failure> {
    match path {
        None => Ok(ShapeSchema::bundled()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::new(Exit::Usage, format!("schema {}: {e}", p.display())))?;
            load_shape_schema(&text).map_err(|e| Failure::new(Exit::Validation, format!("schema {}: {e}", p.display())))
        }
    }
}

/// Root type given as an absolute IRI or as a context term.
pub fn frame_options(frame: &FrameConfig, ctx: &JsonLdContext) -> Result<FrameOptions, Failure> {
    let mut opts = FrameOptions::default();
    if let Some(root) = &frame.root_type {
        opts.root_type = if root.contains("://") {
            root.clone()
        } else {
            ctx.expand_vocab(root).ok_or_else(|| {
                Failure::new(
                    Exit::Framing,
                    format!("root type {root:?} is not defined by the context"),
                )
            })?
        };
    }
    if let Some(url) = &frame.context_reference {
        opts.context_emission = ContextEmission::Reference(url.clone());
    }
    Ok(opts)
}

fn generate_failure(e: GenerateError) -> Failure {
    let exit = match e {
        GenerateError::Parse(_) | GenerateError::Resolve(_) => Exit::Parse,
        GenerateError::Fetch(_) => Exit::Fetch,
        GenerateError::Evaluate(_) => Exit::Generate,
    };
    Failure::new(exit, e)
}

/// Mapping, sources, engine and framing, without touching the output
/// directory.
pub fn build(settings: &Settings) -> Result<Artifacts, Failure> {
    let text = mapping_text(&settings.mapping)?;
    let fetcher = fetcher(settings);
    let generation = generate(&text, &fetcher).map_err(generate_failure)?;
    if generation.graph.is_empty() {
        return Err(Failure::new(Exit::Generate, "the mapping produced no triples"));
    }
    let context = load_jsonld_context(&settings.context, &fetcher)?;
    let opts = frame_options(&settings.frame, &context)?;
    let framed = frame(&generation.graph, &context, &opts).map_err(|e| Failure::new(Exit::Framing, e))?;
    Ok(Artifacts {
        expanded: serialize_expanded(&generation.graph),
        ntriples: serialize_ntriples(&generation.graph),
        graph: generation.graph,
        framed,
        diagnostics: generation.diagnostics,
        context,
    })
}

pub fn render_json(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).unwrap_or_default();
    out.push(b'\n');
    out
}

pub fn planned_files(out: &Path, a: &Artifacts) -> Vec<PlannedFile> {
    vec![
        PlannedFile {
            path: out.join(FRAMED_FILE),
            contents: render_json(&a.framed),
        },
        PlannedFile {
            path: out.join(EXPANDED_FILE),
            contents: render_json(&a.expanded),
        },
        PlannedFile {
            path: out.join(NTRIPLES_FILE),
            contents: a.ntriples.clone().into_bytes(),
        },
    ]
}

fn write_diagnostics(err: &mut dyn Write, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        let _ = writeln!(err, "{d}");
    }
}

fn commit_outputs(out_dir: &Path, a: &Artifacts) -> Result<Vec<(PathBuf, Change)>, Failure> {
    output::commit(&planned_files(out_dir, a)).map_err(|e| {
        Failure::new(
            Exit::Usage,
            format!("cannot write outputs to {}: {e}", out_dir.display()),
        )
    })
}

fn overall(changes: &[(PathBuf, Change)]) -> &'static str {
    if changes.iter().all(|(_, c)| *c == Change::Unchanged) {
        "unchanged"
    } else {
        "changed"
    }
}

fn finish(err: &mut dyn Write, result: Result<Exit, Failure>) -> Exit {
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{f}");
            f.exit
        }
    }
}

fn print_changes(out: &mut dyn Write, changes: &[(PathBuf, Change)]) {
    for (path, change) in changes {
        let _ = writeln!(out, "{}: {}", path.display(), change.as_str());
    }
    let _ = writeln!(out, "status: {}", overall(changes));
}

/// Generates and writes the three output files.
pub fn cmd_generate(settings: &Settings, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let result = build(settings).and_then(|a| {
        write_diagnostics(err, &a.diagnostics);
        let changes = commit_outputs(&settings.out, &a)?;
        print_changes(out, &changes);
        Ok(Exit::Ok)
    });
    finish(err, result)
}

fn passes(report: &ValidationReport, fail_on_warning: bool) -> bool {
    report.conforms && !(fail_on_warning && report.warnings().next().is_some())
}

fn print_report(out: &mut dyn Write, report: &ValidationReport, format: ReportFormat) {
    let _ = match format {
        ReportFormat::Text => write!(out, "{}", report.to_text()),
        ReportFormat::Json => out.write_all(&render_json(&report.to_json())),
    };
}

/// Generate, validate the framed document, then write outputs and report
/// whether they differ from what is on disk. Nothing is written when
/// validation fails.
pub fn cmd_pipeline(settings: &Settings, format: ReportFormat, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let result = (|| {
        let a = build(settings)?;
        write_diagnostics(err, &a.diagnostics);
        let schema = load_schema(settings.schema.as_deref())?;
        let graph = expand(&a.framed, &a.context).map_err(|e| Failure::new(Exit::Framing, e))?;
        let report = metaforge_core::shapes::validate(&graph, &schema);
        let ok = passes(&report, settings.fail_on_warning);
        if !ok {
            print_report(out, &report, format);
            return Err(Failure::new(
                Exit::Validation,
                "the framed document does not conform; no files written",
            ));
        }
        let changes = commit_outputs(&settings.out, &a)?;
        match format {
            ReportFormat::Text => {
                print_report(out, &report, format);
                print_changes(out, &changes);
            }
            ReportFormat::Json => {
                let files: serde_json::Map<String, Value> = changes
                    .iter()
                    .map(|(p, c)| (p.display().to_string(), json!(c.as_str())))
                    .collect();
                let v = json!({"report": report.to_json(), "files": files, "status": overall(&changes)});
                let _ = out.write_all(&render_json(&v));
            }
        }
        Ok(Exit::Ok)
    })();
    finish(err, result)
}

/// Reads a graph from N-Triples (`.nt`), expanded JSON-LD (an array of
/// node objects) or a framed document.
pub fn read_graph(path: &Path, ctx: &JsonLdContext) -> Result<RdfGraph, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", path.display())))?;
    let framing = |e: String| Failure::new(Exit::Framing, format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "nt") {
        return parse_ntriples(&text).map_err(|e| framing(e.to_string()));
    }
    let value: Value = serde_json::from_str(&text).map_err(|e| framing(e.to_string()))?;
    let expanded_form = value
        .as_array()
        .is_some_and(|a| a.iter().all(|n| n.get("@context").is_none()));
    let graph: Result<RdfGraph, JsonLdError> = if expanded_form {
        parse_expanded(&value)
    } else {
        expand(&value, ctx)
    };
    graph.map_err(|e| framing(e.to_string()))
}

pub fn cmd_validate(
    file: &Path,
    schema: Option<&Path>,
    context: &str,
    fail_on_warning: bool,
    format: ReportFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let result = (|| {
        let ctx = load_jsonld_context(context, &Fetcher::local_only())?;
        let schema = load_schema(schema)?;
        let graph = read_graph(file, &ctx)?;
        let report = metaforge_core::shapes::validate(&graph, &schema);
        print_report(out, &report, format);
        Ok(if passes(&report, fail_on_warning) {
            Exit::Ok
        } else {
            Exit::Validation
        })
    })();
    finish(err, result)
}

/// Frames an N-Triples or expanded JSON-LD file.
pub fn cmd_frame(
    input: &Path,
    output: Option<&Path>,
    context: &str,
    root_type: Option<&str>,
    context_reference: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let result = (|| {
        let ctx = load_jsonld_context(context, &Fetcher::local_only())?;
        let graph = read_graph(input, &ctx)?;
        let frame_config = FrameConfig {
            root_type: root_type.map(str::to_string),
            context_reference: context_reference.map(str::to_string),
        };
        let opts = frame_options(&frame_config, &ctx)?;
        let framed = frame(&graph, &ctx, &opts).map_err(|e| Failure::new(Exit::Framing, e))?;
        let bytes = render_json(&framed);
        match output {
            Some(p) => {
                let change = output::commit(&[PlannedFile {
                    path: p.to_path_buf(),
                    contents: bytes,
                }])
                .map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", p.display())))?;
                print_changes(out, &change);
            }
            None => {
                let _ = out.write_all(&bytes);
            }
        }
        Ok(Exit::Ok)
    })();
    finish(err, result)
}

/// Records every given locator, plus the mapping's sources when a mapping
/// is given, into `dir`. Downloads run one after another.
pub fn cmd_record(
    mapping: Option<&MappingSource>,
    locators: &[String],
    dir: &Path,
    timeout: std::time::Duration,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let result = (|| {
        let mut all: Vec<String> = Vec::new();
        if let Some(m) = mapping {
            let text = mapping_text(m)?;
            let doc = parse_mapping(&text).map_err(|e| Failure::new(Exit::Parse, e))?;
            let resolved = resolve_references(doc).map_err(|e| Failure::new(Exit::Parse, e))?;
            all.extend(referenced_sources(&resolved).into_iter().map(|s| s.locator));
        }
        all.extend(locators.iter().cloned());
        if all.is_empty() {
            return Err(Failure::new(
                Exit::Usage,
                "nothing to record: give locators or a mapping",
            ));
        }
        let mut failures = 0;
        for locator in &all {
            match record_fixture(&FetchSpec::new(locator.clone()), dir, timeout) {
                Ok(path) => {
                    let _ = writeln!(out, "{locator} -> {}", path.display());
                }
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(err, "error [fetch]: {e}");
                }
            }
        }
        Ok(if failures == 0 { Exit::Ok } else { Exit::Fetch })
    })();
    finish(err, result)
}
