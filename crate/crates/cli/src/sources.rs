//! Fetching source documents over HTTP or from disk, and the fixture
//! layer that records responses for offline replay.
//!
//! Fixture layout: `<dir>/<sanitized-url>.<json|xml>` holding the body and
//! `<dir>/<sanitized-url>.meta.json` holding `url`, `contentType` and
//! `retrieved`. When two URLs sanitize to the same name, the later one gets
//! a `-<hash>` suffix (first 12 hex digits of the SHA-256 of the URL).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Duration;

use metaforge_core::dsl::SourceDecl;
use metaforge_core::engine::LoadError;
use metaforge_core::query::DocumentError;
use metaforge_core::{Format, SourceDocument, SourceLoader};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
const ACCEPT: &str = "application/json, application/xml";
/// Response bodies above this size are rejected.
const MAX_BODY: u64 = 64 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchSpec {
    pub locator: String,
    pub expected_format: Option<Format>,
    /// Replay from this directory; no network access happens when set.
    pub fixture_dir: Option<PathBuf>,
}

impl FetchSpec {
    pub fn new(locator: impl Into<String>) -> Self {
        FetchSpec {
            locator: locator.into(),
            expected_format: None,
            fixture_dir: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error("{locator}: network error: {message}")]
    Network { locator: String, message: String },
    #[error("{locator}: HTTP status {status}")]
    Status { locator: String, status: u16 },
    #[error("{source}")]
    Parse {
        locator: String,
        #[source]
        source: DocumentError,
    },
    #[error("{locator}: no fixture in {} (looked for {})", dir.display(), name)]
    FixtureMissing {
        locator: String,
        dir: PathBuf,
        name: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{locator}: network access is disabled (replay mode); pass --online or record a fixture")]
    Offline { locator: String },
}

impl SourceError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        SourceError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Metadata stored next to a fixture body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureMeta {
    pub url: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content_type: Option<String>,
    pub retrieved: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// A fetched body before parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawResponse {
    pub body: String,
    pub content_type: Option<String>,
}

pub fn is_url(locator: &str) -> bool {
    let lower = locator.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://")
}

fn local_path(locator: &str) -> &str {
    locator.strip_prefix("file://").unwrap_or(locator)
}

/// Scheme stripped, then every character outside `[A-Za-z0-9._-]`
/// replaced by `_`.
pub fn sanitize_url(url: &str) -> String {
    let rest = url.split_once("://").map_or(url, |(_, r)| r);
    rest.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn url_hash(url: &str) -> String {
    let digest = Sha256::digest(url.as_bytes());
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn meta_path(body: &Path) -> PathBuf {
    let stem = body.file_stem().unwrap_or_default().to_string_lossy();
    body.with_file_name(format!("{stem}.meta.json"))
}

fn read_meta(body: &Path) -> Option<FixtureMeta> {
    let text = fs::read_to_string(meta_path(body)).ok()?;
    serde_json::from_str(&text).ok()
}

/// Finds the fixture for `url`: the plain or hash-suffixed name, with
/// either extension. A candidate whose metadata names another URL is
/// skipped; one without metadata is accepted.
pub fn find_fixture(dir: &Path, url: &str) -> Option<PathBuf> {
    let base = sanitize_url(url);
    let hashed = format!("{base}-{}", url_hash(url));
    for name in [&base, &hashed] {
        for ext in ["json", "xml"] {
            let path = dir.join(format!("{name}.{ext}"));
            if !path.is_file() {
                continue;
            }
            match read_meta(&path) {
                Some(meta) if meta.url != url => continue,
                _ => return Some(path),
            }
        }
    }
    None
}

fn format_from_meta(meta: &Option<FixtureMeta>, path: &Path) -> Option<Format> {
    meta.as_ref()
        .and_then(|m| m.content_type.as_deref())
        .and_then(Format::from_content_type)
        .or_else(|| Format::from_extension(&path.to_string_lossy()))
}

/// Picks the format: explicit, then Content-Type, then the locator's
/// extension, then the leading byte.
pub fn detect_format(
    expected: Option<Format>,
    content_type: Option<&str>,
    locator: &str,
    body: &str,
) -> Option<Format> {
    expected
        .or_else(|| content_type.and_then(Format::from_content_type))
        .or_else(|| last_segment(locator).and_then(Format::from_extension))
        .or_else(|| Format::sniff(body.as_bytes()))
}

fn last_segment(locator: &str) -> Option<&str> {
    let path = locator.split(['?', '#']).next().unwrap_or(locator);
    path.rsplit(['/', '\\']).next()
}

fn parse(locator: &str, raw: &RawResponse, expected: Option<Format>) -> Result<SourceDocument, SourceError> {
    let parse_err = |source| SourceError::Parse {
        locator: locator.into(),
        source,
    };
    match detect_format(expected, raw.content_type.as_deref(), locator, &raw.body) {
        Some(f) => SourceDocument::parse(&raw.body, f, locator).map_err(parse_err),
        None => Err(parse_err(DocumentError::UnknownFormat { origin: locator.into() })),
    }
}

/// HTTP GET with the `Accept` header and a whole-request timeout.
pub fn http_get(url: &str, timeout: Duration) -> Result<RawResponse, SourceError> {
    let agent = ureq::AgentBuilder::new().timeout(timeout).build();
    let response = agent.get(url).set("Accept", ACCEPT).call().map_err(|e| match e {
        ureq::Error::Status(status, _) => SourceError::Status {
            locator: url.into(),
            status,
        },
        ureq::Error::Transport(t) => SourceError::Network {
            locator: url.into(),
            message: t.to_string(),
        },
    })?;
    let content_type = response.header("Content-Type").map(str::to_string);
    let mut bytes = Vec::new();
    response
        .into_reader()
        .take(MAX_BODY)
        .read_to_end(&mut bytes)
        .map_err(|e| SourceError::Network {
            locator: url.into(),
            message: e.to_string(),
        })?;
    let body = String::from_utf8(bytes).map_err(|_| SourceError::Network {
        locator: url.into(),
        message: "response body is not UTF-8".into(),
    })?;
    Ok(RawResponse { body, content_type })
}

fn read_local(locator: &str) -> Result<RawResponse, SourceError> {
    let path = Path::new(local_path(locator));
    let body = fs::read_to_string(path).map_err(|e| SourceError::io(path, e))?;
    Ok(RawResponse {
        body,
        content_type: None,
    })
}

/// Fetches and parses one source. Local paths are always read directly;
/// URLs come from the fixture directory when one is set, otherwise from
/// the network (only if `online`).
#[derive(Debug, Clone)]
pub struct Fetcher {
    pub fixture_dir: Option<PathBuf>,
    pub online: bool,
    pub timeout: Duration,
}

impl Fetcher {
    pub fn replay(dir: impl Into<PathBuf>) -> Self {
        Fetcher {
            fixture_dir: Some(dir.into()),
            online: false,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    /// Local files only: no fixtures, no network.
    pub fn local_only() -> Self {
        Fetcher {
            fixture_dir: None,
            online: false,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn online(timeout: Duration) -> Self {
        Fetcher {
            fixture_dir: None,
            online: true,
            timeout,
        }
    }

    pub fn fetch(&self, spec: &FetchSpec) -> Result<SourceDocument, SourceError> {
        let dir = spec.fixture_dir.as_ref().or(self.fixture_dir.as_ref());
        let locator = spec.locator.as_str();
        if !is_url(locator) {
            return parse(locator, &read_local(locator)?, spec.expected_format);
        }
        if let Some(dir) = dir {
            let Some(path) = find_fixture(dir, locator) else {
                return Err(SourceError::FixtureMissing {
                    locator: locator.into(),
                    dir: dir.clone(),
                    name: format!("{}.json|xml", sanitize_url(locator)),
                });
            };
            let body = fs::read_to_string(&path).map_err(|e| SourceError::io(&path, e))?;
            let meta = read_meta(&path);
            let format = spec.expected_format.or_else(|| format_from_meta(&meta, &path));
            let raw = RawResponse {
                body,
                content_type: meta.and_then(|m| m.content_type),
            };
            return parse(locator, &raw, format);
        }
        if !self.online {
            return Err(SourceError::Offline {
                locator: locator.into(),
            });
        }
        parse(locator, &http_get(locator, self.timeout)?, spec.expected_format)
    }
}

impl SourceLoader for Fetcher {
    fn load(&self, source: &SourceDecl) -> Result<SourceDocument, LoadError> {
        self.fetch(&FetchSpec::new(source.locator.clone()))
            .map_err(|e| LoadError {
                source: source.name.clone(),
                locator: source.locator.clone(),
                message: e.to_string(),
            })
    }

    /// One thread per source; results come back in declaration order.
    fn load_all(&self, sources: &[SourceDecl]) -> Vec<Result<SourceDocument, LoadError>> {
        std::thread::scope(|scope| {
            let handles: Vec<_> = sources.iter().map(|s| scope.spawn(move || self.load(s))).collect();
            handles
                .into_iter()
                .zip(sources)
                .map(|(h, s)| {
                    h.join().unwrap_or_else(|_| {
                        Err(LoadError {
                            source: s.name.clone(),
                            locator: s.locator.clone(),
                            message: "loader thread panicked".into(),
                        })
                    })
                })
                .collect()
        })
    }
}

/// Where a new recording of `url` goes in `dir`: the existing fixture for
/// the same URL, else the plain name if free, else the hash-suffixed one.
pub fn fixture_path_for(dir: &Path, url: &str, format: Format) -> PathBuf {
    if let Some(existing) = find_fixture(dir, url) {
        if existing.extension().and_then(|e| e.to_str()) == Some(format.extension()) {
            return existing;
        }
    }
    let base = sanitize_url(url);
    let taken = ["json", "xml"].iter().any(|ext| {
        let p = dir.join(format!("{base}.{ext}"));
        p.is_file() && read_meta(&p).is_none_or(|m| m.url != url)
    });
    let name = if taken {
        format!("{base}-{}", url_hash(url))
    } else {
        base
    };
    dir.join(format!("{name}.{}", format.extension()))
}

/// Downloads `spec.locator` and stores it as a fixture in `out_dir`.
/// Returns the body path. The body is validated by parsing first.
pub fn record_fixture(spec: &FetchSpec, out_dir: &Path, timeout: Duration) -> Result<PathBuf, SourceError> {
    let url = spec.locator.as_str();
    let raw = if is_url(url) {
        http_get(url, timeout)?
    } else {
        read_local(url)?
    };
    let doc = parse(url, &raw, spec.expected_format)?;
    fs::create_dir_all(out_dir).map_err(|e| SourceError::io(out_dir, e))?;
    let path = fixture_path_for(out_dir, url, doc.format());
    let meta = FixtureMeta {
        url: url.into(),
        content_type: raw.content_type.clone(),
        retrieved: chrono::Utc::now().format("%Y-%m-%d").to_string(),
        notes: None,
    };
    let meta_text = serde_json::to_string_pretty(&meta).unwrap_or_default() + "\n";
    crate::output::write_atomic(&path, raw.body.as_bytes()).map_err(|e| SourceError::io(&path, e))?;
    let mpath = meta_path(&path);
    crate::output::write_atomic(&mpath, meta_text.as_bytes()).map_err(|e| SourceError::io(&mpath, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitizing_matches_the_bundled_names() {
        assert_eq!(
            sanitize_url("https://api.github.com/repos/herminiogg/ShExML"),
            "api.github.com_repos_herminiogg_ShExML"
        );
        assert_eq!(
            sanitize_url("https://repo1.maven.org/maven2/com/herminiogarcia/shexml_3/0.6.0/shexml_3-0.6.0.pom"),
            "repo1.maven.org_maven2_com_herminiogarcia_shexml_3_0.6.0_shexml_3-0.6.0.pom"
        );
    }

    #[test]
    fn format_detection_order() {
        assert_eq!(
            detect_format(None, Some("application/json; charset=utf-8"), "x", "<a/>"),
            Some(Format::Json)
        );
        assert_eq!(detect_format(None, None, "https://h/p/a-1.pom", "{"), Some(Format::Xml));
        assert_eq!(
            detect_format(None, Some("text/plain"), "https://h/a", " [1]"),
            Some(Format::Json)
        );
        assert_eq!(
            detect_format(Some(Format::Xml), Some("application/json"), "a.json", "{}"),
            Some(Format::Xml)
        );
        assert_eq!(detect_format(None, None, "https://h/a?x=1.json", "nope"), None);
    }

    #[test]
    fn bundled_fixtures_replay() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/shexml");
        let f = Fetcher::replay(&dir);
        let pom = f
            .fetch(&FetchSpec::new(
                "https://repo1.maven.org/maven2/com/herminiogarcia/shexml_3/0.6.0/shexml_3-0.6.0.pom",
            ))
            .unwrap();
        assert_eq!(pom.format(), Format::Xml);
        let gh = f
            .fetch(&FetchSpec::new("https://api.github.com/repos/herminiogg/ShExML"))
            .unwrap();
        assert_eq!(gh.format(), Format::Json);
        let again = f
            .fetch(&FetchSpec::new("https://api.github.com/repos/herminiogg/ShExML"))
            .unwrap();
        assert_eq!(gh, again);
        let missing = f
            .fetch(&FetchSpec::new("https://api.github.com/repos/nobody/nothing"))
            .unwrap_err();
        assert!(matches!(missing, SourceError::FixtureMissing { .. }));
        assert!(missing
            .to_string()
            .contains("https://api.github.com/repos/nobody/nothing"));
    }

    #[test]
    fn replay_mode_never_goes_online() {
        let f = Fetcher {
            fixture_dir: None,
            online: false,
            timeout: DEFAULT_TIMEOUT,
        };
        assert!(matches!(
            f.fetch(&FetchSpec::new("https://example.org/x.json")),
            Err(SourceError::Offline { .. })
        ));
    }

    #[test]
    fn colliding_urls_get_distinct_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = "https://h/a/b.json";
        let b = "https://h/a_b.json";
        assert_eq!(sanitize_url(a), sanitize_url(b));
        for (url, body) in [(a, "{\"v\": 1}"), (b, "{\"v\": 2}")] {
            let local = dir.path().join("body.json");
            fs::write(&local, body).unwrap();
            let doc = parse(url, &read_local(local.to_str().unwrap()).unwrap(), None).unwrap();
            let path = fixture_path_for(dir.path(), url, doc.format());
            fs::write(&path, body).unwrap();
            let meta = FixtureMeta {
                url: url.into(),
                content_type: None,
                retrieved: "2025-01-01".into(),
                notes: None,
            };
            fs::write(meta_path(&path), serde_json::to_string(&meta).unwrap()).unwrap();
        }
        let pa = find_fixture(dir.path(), a).unwrap();
        let pb = find_fixture(dir.path(), b).unwrap();
        assert_ne!(pa, pb);
        assert_eq!(fixture_path_for(dir.path(), a, Format::Json), pa);
        assert_eq!(fixture_path_for(dir.path(), b, Format::Json), pb);
        let f = Fetcher::replay(dir.path());
        let da = f.fetch(&FetchSpec::new(a)).unwrap();
        let db = f.fetch(&FetchSpec::new(b)).unwrap();
        assert_ne!(da.json(), db.json());
    }

    #[test]
    fn local_files_and_expected_format() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("data.txt");
        fs::write(&p, "<project><name>x</name></project>").unwrap();
        let loc = p.to_str().unwrap();
        assert_eq!(
            Fetcher::replay(dir.path())
                .fetch(&FetchSpec::new(loc))
                .unwrap()
                .format(),
            Format::Xml
        );
        let forced = FetchSpec {
            expected_format: Some(Format::Json),
            ..FetchSpec::new(loc)
        };
        assert!(matches!(
            Fetcher::replay(dir.path()).fetch(&forced),
            Err(SourceError::Parse { .. })
        ));
        let file_url = format!("file://{loc}");
        assert!(Fetcher::replay(dir.path()).fetch(&FetchSpec::new(file_url)).is_ok());
    }
}
