//! Bundled crosswalk templates (GitHub, Maven, Zenodo and the merged
//! multi-source mapping) and their attribute coverage table.
//!
//! Templates are mapping documents with `{{name}}` placeholders. Lines
//! between `{{#flag}}` and `{{/flag}}` are kept only when `flag` is bound
//! to `true`; an unbound flag counts as `false`.

mod coverage;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use coverage::{
    check_coverage, list_crosswalk_coverage, statement_bindings, CoverageError, CoverageReport, CoverageRow,
    StatementBinding,
};

pub type Params = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateId {
    Github,
    Maven,
    Zenodo,
    Merged,
}

impl TemplateId {
    pub const ALL: [TemplateId; 4] = [
        TemplateId::Github,
        TemplateId::Maven,
        TemplateId::Zenodo,
        TemplateId::Merged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::Github => "github",
            TemplateId::Maven => "maven",
            TemplateId::Zenodo => "zenodo",
            TemplateId::Merged => "merged",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = UnknownTemplate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTemplate(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown template `{0}` (expected github, maven, zenodo or merged)")]
pub struct UnknownTemplate(pub String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstantiateError {
    #[error("unbound placeholder {{{{{0}}}}}")]
    Unbound(String),
    #[error("flag `{name}` must be true or false, got `{value}`")]
    BadFlag { name: String, value: String },
    #[error("unbalanced section `{0}`")]
    Unbalanced(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrosswalkTemplate {
    pub id: TemplateId,
    pub mapping_text: &'static str,
    /// Parameter values of the ShExML engine release the templates were
    /// written for.
    pub defaults: &'static [(&'static str, &'static str)],
}

const SHEXML_POM: &str = "https://repo1.maven.org/maven2/com/herminiogarcia/shexml_3/0.6.0/shexml_3-0.6.0.pom";

const TEMPLATES: [CrosswalkTemplate; 4] = [
    CrosswalkTemplate {
        id: TemplateId::Github,
        mapping_text: include_str!("../../templates/github.shexml.tmpl"),
        defaults: &[("owner", "herminiogg"), ("repo", "ShExML")],
    },
    CrosswalkTemplate {
        id: TemplateId::Maven,
        mapping_text: include_str!("../../templates/maven.shexml.tmpl"),
        defaults: &[("pom_url", SHEXML_POM)],
    },
    CrosswalkTemplate {
        id: TemplateId::Zenodo,
        mapping_text: include_str!("../../templates/zenodo.shexml.tmpl"),
        defaults: &[("zenodo_record", "17092549")],
    },
    CrosswalkTemplate {
        id: TemplateId::Merged,
        mapping_text: include_str!("../../templates/merged.shexml.tmpl"),
        defaults: &[
            ("owner", "herminiogg"),
            ("repo", "ShExML"),
            ("pom_url", SHEXML_POM),
            ("zenodo_record", "17092549"),
            ("include_contributor", "true"),
        ],
    },
];

impl CrosswalkTemplate {
    pub fn get(id: TemplateId) -> &'static CrosswalkTemplate {
        &TEMPLATES[id as usize]
    }

    pub fn all() -> &'static [CrosswalkTemplate] {
        &TEMPLATES
    }

    pub fn default_params(&self) -> Params {
        self.defaults
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    /// Defaults overridden by `overrides`.
    pub fn params_with(&self, overrides: &Params) -> Params {
        let mut p = self.default_params();
        p.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        p
    }

    /// Value placeholders (`{{name}}`), excluding section flags.
    pub fn placeholders(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut rest = self.mapping_text;
        while let Some(start) = rest.find("{{") {
            let Some(len) = rest[start + 2..].find("}}") else { break };
            let name = &rest[start + 2..start + 2 + len];
            if !name.starts_with(['#', '/']) {
                out.insert(name.to_string());
            }
            rest = &rest[start + 2 + len + 2..];
        }
        out
    }

    pub fn instantiate(&self, params: &Params) -> Result<String, InstantiateError> {
        instantiate(self.mapping_text, params)
    }
}

fn section_marker(line: &str) -> Option<(bool, &str)> {
    let inner = line.trim().strip_prefix("{{")?.strip_suffix("}}")?;
    if let Some(name) = inner.strip_prefix('#') {
        Some((true, name))
    } else {
        inner.strip_prefix('/').map(|name| (false, name))
    }
}

fn flag(params: &Params, name: &str) -> Result<bool, InstantiateError> {
    match params.get(name).map(String::as_str) {
        None | Some("false") => Ok(false),
        Some("true") => Ok(true),
        Some(other) => Err(InstantiateError::BadFlag {
            name: name.into(),
            value: other.into(),
        }),
    }
}

/// Expands sections, then substitutes every `{{name}}`.
pub fn instantiate(template: &str, params: &Params) -> Result<String, InstantiateError> {
    let mut out = String::with_capacity(template.len());
    // Open sections with whether their content is kept.
    let mut open: Vec<(&str, bool)> = Vec::new();
    for line in template.split_inclusive('\n') {
        if let Some((opening, name)) = section_marker(line) {
            if opening {
                open.push((name, flag(params, name)?));
            } else if open.pop().map(|(n, _)| n) != Some(name) {
                return Err(InstantiateError::Unbalanced(name.into()));
            }
            continue;
        }
        if open.iter().all(|(_, keep)| *keep) {
            out.push_str(line);
        }
    }
    if let Some((name, _)) = open.pop() {
        return Err(InstantiateError::Unbalanced(name.into()));
    }

    let mut result = String::with_capacity(out.len());
    let mut rest = out.as_str();
    while let Some(start) = rest.find("{{") {
        result.push_str(&rest[..start]);
        let Some(len) = rest[start + 2..].find("}}") else {
            return Err(InstantiateError::Unbalanced(
                rest[start..].lines().next().unwrap_or("").into(),
            ));
        };
        let name = &rest[start + 2..start + 2 + len];
        let value = params.get(name).ok_or_else(|| InstantiateError::Unbound(name.into()))?;
        result.push_str(value);
        rest = &rest[start + 2 + len + 2..];
    }
    result.push_str(rest);
    Ok(result)
}
