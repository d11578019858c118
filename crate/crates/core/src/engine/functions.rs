//! Built-in transformation functions callable from generators.

use alloc::format;
use alloc::string::{String, ToString};

/// Name and arity of every built-in.
pub const BUILTINS: &[(&str, usize)] = &[
    ("onlyDate", 1),
    ("normalizeGitHubAPIUrl", 1),
    ("removeParametersGithubAPI", 1),
    ("getLocalPartGithubRepo", 1),
    ("concatenateMavenGroupAndArtifactIds", 2),
];

const GITHUB_API_REPOS: &str = "https://api.github.com/repos/";
const GITHUB: &str = "https://github.com/";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("unknown function {0:?}")]
    Unknown(String),
    #[error("function {function} takes {expected} argument(s), {found} given")]
    Arity {
        function: String,
        expected: usize,
        found: usize,
    },
    #[error("{function}: malformed input {input:?}: {reason}")]
    Malformed {
        function: String,
        input: String,
        reason: &'static str,
    },
}

pub fn arity(name: &str) -> Option<usize> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}

pub fn apply_function(name: &str, args: &[&str]) -> Result<String, FunctionError> {
    let expected = arity(name).ok_or_else(|| FunctionError::Unknown(name.into()))?;
    if args.len() != expected {
        return Err(FunctionError::Arity {
            function: name.into(),
            expected,
            found: args.len(),
        });
    }
    let malformed = |reason| FunctionError::Malformed {
        function: name.into(),
        input: args.join(", "),
        reason,
    };
    match name {
        "onlyDate" => only_date(args[0]).ok_or_else(|| malformed("expected a yyyy-MM-dd prefix")),
        "normalizeGitHubAPIUrl" => {
            let rest = args[0]
                .strip_prefix(GITHUB_API_REPOS)
                .ok_or_else(|| malformed("not a GitHub API repository URL"))?;
            let rest = strip_template(rest);
            if rest.split('/').filter(|s| !s.is_empty()).count() < 2 {
                return Err(malformed("missing owner or repository"));
            }
            Ok(format!("{GITHUB}{rest}"))
        }
        "removeParametersGithubAPI" => Ok(strip_template(args[0]).to_string()),
        "getLocalPartGithubRepo" => {
            let rest = args[0]
                .strip_prefix(GITHUB)
                .or_else(|| args[0].strip_prefix("http://github.com/"))
                .map(|r| r.trim_end_matches('/'))
                .filter(|r| !r.is_empty())
                .ok_or_else(|| malformed("not a GitHub URL"))?;
            Ok(rest.strip_suffix(".git").unwrap_or(rest).to_string())
        }
        "concatenateMavenGroupAndArtifactIds" => {
            if args[0].is_empty() || args[1].is_empty() {
                return Err(malformed("empty groupId or artifactId"));
            }
            Ok(format!("{}:{}", args[0], args[1]))
        }
        _ => Err(FunctionError::Unknown(name.into())),
    }
}

/// Drops a trailing `{...}` URI-template segment.
fn strip_template(url: &str) -> &str {
    match url.strip_suffix('}').and_then(|u| u.rfind('{')) {
        Some(open) => &url[..open],
        None => url,
    }
}

fn only_date(value: &str) -> Option<String> {
    let date = value.trim().get(..10)?;
    let b = date.as_bytes();
    let digits = |r: core::ops::Range<usize>| b[r].iter().all(u8::is_ascii_digit);
    if !(digits(0..4) && b[4] == b'-' && digits(5..7) && b[7] == b'-' && digits(8..10)) {
        return None;
    }
    let month: u32 = date[5..7].parse().ok()?;
    let day: u32 = date[8..10].parse().ok()?;
    let year: u32 = date[..4].parse().ok()?;
    let leap = (year.is_multiple_of(4) && !year.is_multiple_of(100)) || year.is_multiple_of(400);
    let max = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if leap => 29,
        2 => 28,
        _ => return None,
    };
    (1..=max).contains(&day).then(|| date.to_string())
}
