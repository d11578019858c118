//! Pipeline configuration: a JSON file, the `METAFORGE_FIXTURES`
//! environment variable and command-line flags, in increasing priority.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

pub const FIXTURES_ENV: &str = "METAFORGE_FIXTURES";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FrameConfig {
    /// Class IRI or CodeMeta term of the root node.
    pub root_type: Option<String>,
    /// Write this URL as `@context` instead of the inline context.
    pub context_reference: Option<String>,
}

/// The config file as written. Relative paths are resolved against the
/// file's directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PipelineConfig {
    pub mapping: Option<PathBuf>,
    pub template: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    /// `bundled`, a file path or a URL.
    pub context: Option<String>,
    #[serde(default)]
    pub frame: FrameConfig,
    pub out: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    #[serde(default)]
    pub online: bool,
    /// Shape schema file; the bundled CodeMeta schema when absent.
    pub schema: Option<PathBuf>,
    #[serde(default)]
    pub fail_on_warning: bool,
    pub timeout_secs: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid --param {0:?}: expected KEY=VALUE")]
    Param(String),
    #[error("give either a mapping path or a template id, not both")]
    MappingAndTemplate,
    #[error("no mapping: pass --mapping PATH or --template ID")]
    NoMapping,
    #[error("--online and a fixture directory exclude each other; drop one of them")]
    OnlineWithFixtures,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        let mut cfg: PipelineConfig = serde_json::from_str(&text).map_err(|source| ConfigError::Json {
            path: path.into(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        rebase(&mut cfg.mapping);
        rebase(&mut cfg.out);
        rebase(&mut cfg.fixtures);
        rebase(&mut cfg.schema);
        if let Some(c) = &cfg.context {
            if c != "bundled" && !crate::sources::is_url(c) && Path::new(c).is_relative() {
                cfg.context = Some(base.join(c).to_string_lossy().into_owned());
            }
        }
        Ok(cfg)
    }
}

/// Command-line values; `None` or `false` means "not given".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub mapping: Option<PathBuf>,
    pub template: Option<String>,
    pub params: Vec<String>,
    pub context: Option<String>,
    pub root_type: Option<String>,
    pub context_reference: Option<String>,
    pub out: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    pub online: bool,
    pub schema: Option<PathBuf>,
    pub fail_on_warning: bool,
    pub timeout_secs: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingSource {
    Path(PathBuf),
    Template {
        id: String,
        params: BTreeMap<String, String>,
    },
}

/// Fully merged settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub mapping: MappingSource,
    pub context: String,
    pub frame: FrameConfig,
    pub out: PathBuf,
    pub fixtures: Option<PathBuf>,
    pub online: bool,
    pub schema: Option<PathBuf>,
    pub fail_on_warning: bool,
    pub timeout: Duration,
}

pub fn parse_param(s: &str) -> Result<(String, String), ConfigError> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.to_string())),
        _ => Err(ConfigError::Param(s.into())),
    }
}

/// Merges config file, environment and flags. `env_fixtures` is the value
/// of `METAFORGE_FIXTURES`, passed in so callers and tests control it.
pub fn resolve(
    file: Option<PipelineConfig>,
    env_fixtures: Option<PathBuf>,
    flags: Overrides,
) -> Result<Settings, ConfigError> {
    let file = file.unwrap_or_default();
    let mut params = file.params;
    for p in &flags.params {
        let (k, v) = parse_param(p)?;
        params.insert(k, v);
    }
    let (mapping, template) = if flags.mapping.is_some() || flags.template.is_some() {
        (flags.mapping, flags.template)
    } else {
        (file.mapping, file.template)
    };
    let mapping = match (mapping, template) {
        (Some(_), Some(_)) => return Err(ConfigError::MappingAndTemplate),
        (Some(p), None) => MappingSource::Path(p),
        (None, Some(id)) => MappingSource::Template { id, params },
        (None, None) => return Err(ConfigError::NoMapping),
    };
    let online = flags.online || file.online;
    let fixtures = if flags.online {
        flags.fixtures
    } else {
        flags.fixtures.or(env_fixtures).or(file.fixtures)
    };
    if online && fixtures.is_some() {
        return Err(ConfigError::OnlineWithFixtures);
    }
    Ok(Settings {
        mapping,
        context: flags.context.or(file.context).unwrap_or_else(|| "bundled".into()),
        frame: FrameConfig {
            root_type: flags.root_type.or(file.frame.root_type),
            context_reference: flags.context_reference.or(file.frame.context_reference),
        },
        out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        fixtures,
        online,
        schema: flags.schema.or(file.schema),
        fail_on_warning: flags.fail_on_warning || file.fail_on_warning,
        timeout: Duration::from_secs(flags.timeout_secs.or(file.timeout_secs).unwrap_or(30)),
    })
}
