//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, Exit, Failure, ReportFormat};
use crate::config::{self, Overrides, PipelineConfig};
use crate::scaffold::{github_actions_workflow, ScaffoldOptions};

#[derive(Debug, Parser)]
#[command(
    name = "metaforge",
    version,
    about = "Generate, frame and validate CodeMeta metadata from declarative mappings"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a mapping and write codemeta.json, codemeta.expanded.jsonld and codemeta.nt
    Generate(PipelineArgs),
    /// Generate, validate, write outputs and report whether they changed
    Pipeline(PipelineArgs),
    /// Validate a framed, expanded or N-Triples file against a shape schema
    Validate(ValidateArgs),
    /// Frame an N-Triples or expanded JSON-LD file
    Frame(FrameArgs),
    /// Download sources into a fixture directory for offline replay
    Record(RecordArgs),
    /// Write a CI workflow that runs the pipeline
    ScaffoldCi(ScaffoldArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct MappingArgs {
    /// Mapping file
    #[arg(long, value_name = "PATH")]
    mapping: Option<PathBuf>,
    /// Bundled template: github, maven, zenodo or merged
    #[arg(long, value_name = "ID")]
    template: Option<String>,
    /// Template parameter, repeatable
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// JSON config file; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    mapping: MappingArgs,
    /// JSON-LD context: bundled, a file or a URL
    #[arg(long, value_name = "PATH|URL|bundled")]
    context: Option<String>,
    /// Root node type (IRI or context term)
    #[arg(long, value_name = "TYPE")]
    root_type: Option<String>,
    /// Emit this URL as @context instead of the inline context
    #[arg(long, value_name = "URL")]
    context_reference: Option<String>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Replay sources from this fixture directory
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Fetch sources over the network
    #[arg(long)]
    online: bool,
    /// Shape schema (defaults to the bundled CodeMeta schema)
    #[arg(long, value_name = "PATH")]
    schema: Option<PathBuf>,
    /// Treat validation warnings as failures
    #[arg(long)]
    fail_on_warning: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// HTTP timeout in seconds
    #[arg(long, value_name = "SECS")]
    timeout: Option<u64>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    file: PathBuf,
    #[arg(long, value_name = "PATH")]
    schema: Option<PathBuf>,
    #[arg(long, value_name = "PATH|bundled", default_value = "bundled")]
    context: String,
    #[arg(long)]
    fail_on_warning: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct FrameArgs {
    input: PathBuf,
    /// Output file; stdout when absent
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_name = "PATH|bundled", default_value = "bundled")]
    context: String,
    #[arg(long, value_name = "TYPE")]
    root_type: Option<String>,
    #[arg(long, value_name = "URL")]
    context_reference: Option<String>,
}

#[derive(Debug, Args)]
struct RecordArgs {
    /// URLs or files to record
    locators: Vec<String>,
    #[command(flatten)]
    mapping: MappingArgs,
    /// Fixture directory to write
    #[arg(long, value_name = "DIR", default_value = "fixtures")]
    fixtures: PathBuf,
    #[arg(long, value_name = "SECS", default_value_t = 30)]
    timeout: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CiTarget {
    GithubActions,
}

#[derive(Debug, Args)]
struct ScaffoldArgs {
    #[arg(long, value_enum, default_value = "github-actions")]
    target: CiTarget,
    /// Config file the workflow passes to the pipeline
    #[arg(long, value_name = "PATH", default_value = "metaforge.json")]
    config: String,
    /// Output directory of the generated files
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: String,
    /// Let the workflow fetch live sources
    #[arg(long)]
    online: bool,
    #[arg(long, default_value = "main")]
    branch: String,
    #[arg(long, value_name = "CMD", default_value = "cargo install --locked metaforge")]
    install_command: String,
    /// Workflow file; `-` for stdout
    #[arg(long, short, value_name = "PATH", default_value = ".github/workflows/codemeta.yml")]
    output: PathBuf,
}

fn settings(args: &PipelineArgs, env_fixtures: Option<PathBuf>) -> Result<config::Settings, Failure> {
    let usage = |e: config::ConfigError| Failure::new(Exit::Usage, e);
    let file = args
        .config
        .as_deref()
        .map(PipelineConfig::load)
        .transpose()
        .map_err(usage)?;
    let flags = Overrides {
        mapping: args.mapping.mapping.clone(),
        template: args.mapping.template.clone(),
        params: args.mapping.params.clone(),
        context: args.context.clone(),
        root_type: args.root_type.clone(),
        context_reference: args.context_reference.clone(),
        out: args.out.clone(),
        fixtures: args.fixtures.clone(),
        online: args.online,
        schema: args.schema.clone(),
        fail_on_warning: args.fail_on_warning,
        timeout_secs: args.timeout,
    };
    config::resolve(file, env_fixtures, flags).map_err(usage)
}

fn record_mapping(m: &MappingArgs) -> Result<Option<config::MappingSource>, Failure> {
    let usage = |e: config::ConfigError| Failure::new(Exit::Usage, e);
    let mut params = std::collections::BTreeMap::new();
    for p in &m.params {
        let (k, v) = config::parse_param(p).map_err(usage)?;
        params.insert(k, v);
    }
    Ok(match (&m.mapping, &m.template) {
        (Some(_), Some(_)) => return Err(usage(config::ConfigError::MappingAndTemplate)),
        (Some(p), None) => Some(config::MappingSource::Path(p.clone())),
        (None, Some(id)) => Some(config::MappingSource::Template { id: id.clone(), params }),
        (None, None) => None,
    })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, env_fixtures: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage.code() } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let fail = |err: &mut dyn Write, f: Failure| {
        let _ = writeln!(err, "{f}");
        f.exit.code()
    };
    match cli.command {
        Command::Generate(a) => match settings(&a, env_fixtures) {
            Ok(s) => commands::cmd_generate(&s, out, err).code(),
            Err(f) => fail(err, f),
        },
        Command::Pipeline(a) => match settings(&a, env_fixtures) {
            Ok(s) => commands::cmd_pipeline(&s, a.format.into(), out, err).code(),
            Err(f) => fail(err, f),
        },
        Command::Validate(a) => commands::cmd_validate(
            &a.file,
            a.schema.as_deref(),
            &a.context,
            a.fail_on_warning,
            a.format.into(),
            out,
            err,
        )
        .code(),
        Command::Frame(a) => commands::cmd_frame(
            &a.input,
            a.output.as_deref(),
            &a.context,
            a.root_type.as_deref(),
            a.context_reference.as_deref(),
            out,
            err,
        )
        .code(),
        Command::Record(a) => match record_mapping(&a.mapping) {
            Ok(m) => commands::cmd_record(
                m.as_ref(),
                &a.locators,
                &a.fixtures,
                std::time::Duration::from_secs(a.timeout),
                out,
                err,
            )
            .code(),
            Err(f) => fail(err, f),
        },
        Command::ScaffoldCi(a) => {
            let CiTarget::GithubActions = a.target;
            let wf = github_actions_workflow(&ScaffoldOptions {
                config: a.config,
                out: a.out,
                online: a.online,
                branch: a.branch,
                install_command: a.install_command,
            });
            if a.output.as_os_str() == "-" {
                let _ = out.write_all(wf.as_bytes());
                return 0;
            }
            match crate::output::commit(&[crate::output::PlannedFile {
                path: a.output.clone(),
                contents: wf.into_bytes(),
            }]) {
                Ok(changes) => {
                    for (p, c) in changes {
                        let _ = writeln!(out, "{}: {}", p.display(), c.as_str());
                    }
                    0
                }
                Err(e) => fail(err, Failure::new(Exit::Usage, format!("{}: {e}", a.output.display()))),
            }
        }
    }
}
