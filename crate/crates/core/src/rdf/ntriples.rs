//! N-Triples reading and writing.
//!
//! Output is one triple per line, lines sorted lexicographically, so equal
//! graphs always serialize to identical bytes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::graph::{RdfGraph, Triple};
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("N-Triples line {line}: {message}")]
pub struct NTriplesError {
    pub line: usize,
    pub message: String,
}

pub fn serialize_ntriples(g: &RdfGraph) -> String {
    let mut lines: Vec<String> = g.iter().map(triple_line).collect();
    lines.sort();
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn triple_line(t: &Triple) -> String {
    let mut line = String::new();
    write_term(&mut line, t.subject());
    line.push(' ');
    write_term(&mut line, t.predicate());
    line.push(' ');
    write_term(&mut line, t.object());
    line.push_str(" .");
    line
}

fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => write_iri(out, iri),
        Term::Blank(label) => {
            out.push_str("_:");
            out.push_str(label);
        }
        Term::Literal(lit) => {
            out.push('"');
            for c in lit.value().chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    '\t' => out.push_str("\\t"),
                    '\u{8}' => out.push_str("\\b"),
                    '\u{c}' => out.push_str("\\f"),
                    c if (c as u32) < 0x20 || c == '\u{7f}' => {
                        let _ = write!(out, "\\u{:04X}", c as u32);
                    }
                    c => out.push(c),
                }
            }
            out.push('"');
            if let Some(dt) = lit.datatype() {
                out.push_str("^^");
                write_iri(out, dt);
            }
        }
    }
}

fn write_iri(out: &mut String, iri: &str) {
    out.push('<');
    for c in iri.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out.push('>');
}

pub fn parse_ntriples(text: &str) -> Result<RdfGraph, NTriplesError> {
    let mut graph = RdfGraph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| NTriplesError {
            line: idx + 1,
            message: message.into(),
        };
        let mut cur = LineCursor { rest: line };
        let s = cur.term().map_err(|m| err(&m))?;
        let p = cur.term().map_err(|m| err(&m))?;
        let o = cur.term().map_err(|m| err(&m))?;
        cur.skip_ws();
        if cur.rest != "." {
            return Err(err("expected terminating '.'"));
        }
        let triple = Triple::new(s, p, o).map_err(|e| err(&alloc::format!("{e}")))?;
        graph.insert(triple);
    }
    Ok(graph)
}

struct LineCursor<'a> {
    rest: &'a str,
}

impl LineCursor<'_> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn term(&mut self) -> Result<Term, String> {
        self.skip_ws();
        if let Some(rest) = self.rest.strip_prefix('<') {
            let end = rest.find('>').ok_or("unterminated IRI")?;
            let iri = unescape(&rest[..end])?;
            self.rest = &rest[end + 1..];
            Term::iri(iri).map_err(|e| alloc::format!("{e}"))
        } else if let Some(rest) = self.rest.strip_prefix("_:") {
            let end = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
            self.rest = &rest[end..];
            Term::blank(&rest[..end]).map_err(|e| alloc::format!("{e}"))
        } else if let Some(rest) = self.rest.strip_prefix('"') {
            let mut end = None;
            let mut escaped = false;
            for (i, c) in rest.char_indices() {
                match c {
                    _ if escaped => escaped = false,
                    '\\' => escaped = true,
                    '"' => {
                        end = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let end = end.ok_or("unterminated literal")?;
            let value = unescape(&rest[..end])?;
            self.rest = &rest[end + 1..];
            if let Some(after) = self.rest.strip_prefix("^^<") {
                let close = after.find('>').ok_or("unterminated datatype IRI")?;
                let dt = unescape(&after[..close])?;
                self.rest = &after[close + 1..];
                Ok(Term::typed_literal(value, dt))
            } else if self.rest.starts_with('@') {
                Err("language-tagged literals are not supported".into())
            } else {
                Ok(Term::literal(value))
            }
        } else {
            Err("expected a term".into())
        }
    }
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some('"') => out.push('"'),
            Some('\'') => out.push('\''),
            Some('\\') => out.push('\\'),
            Some(u @ ('u' | 'U')) => {
                let width = if u == 'u' { 4 } else { 8 };
                let hex: String = chars.by_ref().take(width).collect();
                let code = (hex.len() == width)
                    .then(|| u32::from_str_radix(&hex, 16).ok())
                    .flatten()
                    .and_then(char::from_u32)
                    .ok_or("bad unicode escape")?;
                out.push(code);
            }
            _ => return Err("bad escape sequence".into()),
        }
    }
    Ok(out)
}
