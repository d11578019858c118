use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use crate::vocab::XSD_STRING;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("not an absolute IRI: {0:?}")]
    RelativeIri(String),
    #[error("invalid blank node label: {0:?}")]
    BlankLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Iri,
    Blank,
    Literal,
}

/// A literal value. A missing datatype means `xsd:string`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    value: String,
    datatype: Option<String>,
}

impl Literal {
    pub fn value(&self) -> &str {
        &self.value
    }

    /// Explicit datatype IRI, `None` for plain (`xsd:string`) literals.
    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }

    pub fn datatype_or_string(&self) -> &str {
        self.datatype.as_deref().unwrap_or(XSD_STRING)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Result<Self, TermError> {
        let iri = iri.into();
        if is_absolute_iri(&iri) {
            Ok(Term::Iri(iri))
        } else {
            Err(TermError::RelativeIri(iri))
        }
    }

    /// Blank node from its label, with or without the `_:` prefix.
    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        let bare = label.strip_prefix("_:").unwrap_or(&label);
        if is_valid_blank_label(bare) {
            Ok(Term::Blank(bare.to_string()))
        } else {
            Err(TermError::BlankLabel(label))
        }
    }

    pub fn literal(value: impl Into<String>) -> Self {
        Term::Literal(Literal {
            value: value.into(),
            datatype: None,
        })
    }

    pub fn typed_literal(value: impl Into<String>, datatype: impl Into<String>) -> Self {
        let datatype = datatype.into();
        Term::Literal(Literal {
            value: value.into(),
            datatype: (datatype != XSD_STRING).then_some(datatype),
        })
    }

    pub fn kind(&self) -> TermKind {
        match self {
            Term::Iri(_) => TermKind::Iri,
            Term::Blank(_) => TermKind::Blank,
            Term::Literal(_) => TermKind::Literal,
        }
    }

    /// IRI text, blank label (without `_:`) or lexical form.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(v) | Term::Blank(v) => v,
            Term::Literal(l) => &l.value,
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_node(&self) -> bool {
        !self.is_literal()
    }

    /// Identifier as it appears in JSON-LD `@id` values: the IRI or `_:label`.
    pub fn node_id(&self) -> Option<String> {
        match self {
            Term::Iri(v) => Some(v.clone()),
            Term::Blank(v) => Some(alloc::format!("_:{v}")),
            Term::Literal(_) => None,
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Kind first, then text, then datatype.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind()
            .cmp(&other.kind())
            .then_with(|| self.value().cmp(other.value()))
            .then_with(|| match (self, other) {
                (Term::Literal(a), Term::Literal(b)) => a.datatype.cmp(&b.datatype),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(v) => write!(f, "<{v}>"),
            Term::Blank(v) => write!(f, "_:{v}"),
            Term::Literal(l) => match &l.datatype {
                Some(dt) => write!(f, "{:?}^^<{dt}>", l.value),
                None => write!(f, "{:?}", l.value),
            },
        }
    }
}

/// `scheme ":" rest` with an RFC 3986 scheme and no characters that are
/// illegal anywhere in an IRI.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !rest.is_empty()
        && !s
            .chars()
            .any(|c| c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`'))
}

pub fn is_valid_blank_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_validation() {
        assert!(Term::iri("https://github.com/herminiogg/ShExML").is_ok());
        assert!(Term::iri("mailto:a@b.c").is_ok());
        assert!(Term::iri("herminiogg/ShExML").is_err());
        assert!(Term::iri("http://example.org/a b").is_err());
        assert!(Term::iri("1http://x").is_err());
    }

    #[test]
    fn blank_labels() {
        assert_eq!(Term::blank("_:mainAuthor").unwrap(), Term::Blank("mainAuthor".into()));
        assert!(Term::blank("_:main-author").is_err());
        assert!(Term::blank("").is_err());
    }

    #[test]
    fn xsd_string_is_the_default_datatype() {
        assert_eq!(Term::typed_literal("x", XSD_STRING), Term::literal("x"));
        assert_eq!(
            Term::literal("x").as_literal().unwrap().datatype_or_string(),
            XSD_STRING
        );
    }
}
