//! Hand-written recursive-descent parser for mapping documents.
//!
//! The grammar is context sensitive (query text inside `<...>` is taken
//! verbatim, prefixed names may carry a bracketed generator as their local
//! part), so there is no separate tokenizer: the parser walks a character
//! cursor that tracks line and column for error reporting.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;

const UNSUPPORTED: &[&str] = &["MATCHER", "JOIN", "MATCHING"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    /// A ShExML construct this engine deliberately does not implement.
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}:{}: {msg}", self.line, self.column)
            }
            ParseErrorKind::Unsupported(what) => {
                write!(f, "unsupported construct {what} at {}:{}", self.line, self.column)
            }
        }
    }
}

type PResult<T> = Result<T, ParseError>;

pub fn parse_mapping(text: &str) -> Result<MappingDocument, ParseError> {
    Parser::new(text).document()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        self.rest().chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            line: self.line,
            column: self.column,
        })
    }

    fn unsupported<T>(&self, what: &str) -> PResult<T> {
        Err(ParseError {
            kind: ParseErrorKind::Unsupported(what.to_string()),
            line: self.line,
            column: self.column,
        })
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            Some(c) => alloc::format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }

    /// Whitespace and `##` comments.
    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') if self.peek_second() == Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.error(alloc::format!("expected {c:?}, found {}", self.describe_next()))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Raw run of identifier characters, possibly empty.
    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                self.bump();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn peek_word(&self) -> &'a str {
        let rest = self.rest();
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-'))
            .unwrap_or(rest.len());
        &rest[..end]
    }

    fn identifier(&mut self, what: &str) -> PResult<String> {
        self.skip_trivia();
        let word = self.peek_word();
        if UNSUPPORTED.contains(&word) {
            return self.unsupported(word);
        }
        let valid = word.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if !valid {
            return self.error(alloc::format!("expected {what}, found {}", self.describe_next()));
        }
        Ok(self.word().to_string())
    }

    /// Text between `<` and the next unescaped `>`; `\>` and `\\` are escapes.
    fn angle_text(&mut self) -> PResult<String> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.error("unterminated '<...>'"),
                Some('>') => return Ok(out),
                Some('\\') if matches!(self.peek(), Some('>' | '\\')) => {
                    out.push(self.bump().unwrap_or('\\'));
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn string_literal(&mut self) -> PResult<String> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.error("unterminated string literal"),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('r') => out.push('\r'),
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    _ => return self.error("invalid escape in string literal"),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn local_part(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let continues = c.is_ascii_alphanumeric()
                || matches!(c, '_' | '-' | '%')
                || (c == '.'
                    && self
                        .peek_second()
                        .is_some_and(|n| n.is_ascii_alphanumeric() || matches!(n, '_' | '-' | '%')));
            if !continues {
                break;
            }
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn prefix_label(&mut self) -> PResult<String> {
        let word = self.peek_word();
        if !word.is_empty() && !word.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return self.error(alloc::format!("invalid prefix label {word:?}"));
        }
        let label = self.word().to_string();
        if !self.eat(':') {
            return self.error(alloc::format!(
                "expected ':' after prefix label, found {}",
                self.describe_next()
            ));
        }
        Ok(label)
    }

    fn prefixed_name(&mut self) -> PResult<PrefixedName> {
        self.skip_trivia();
        let prefix = self.prefix_label()?;
        if self.peek() == Some('[') {
            return self.error("a generated IRI is not allowed here");
        }
        Ok(PrefixedName::new(prefix, self.local_part()))
    }

    fn document(mut self) -> PResult<MappingDocument> {
        let mut doc = MappingDocument::default();
        loop {
            self.skip_trivia();
            if self.peek().is_none() {
                return Ok(doc);
            }
            let word = self.peek_word();
            let keyword_follows = self.rest()[word.len()..]
                .chars()
                .next()
                .is_some_and(char::is_whitespace);
            match word {
                _ if UNSUPPORTED.contains(&word) => return self.unsupported(word),
                "PREFIX" if keyword_follows => {
                    self.word();
                    doc.prefixes.push(self.prefix_decl()?);
                }
                "SOURCE" if keyword_follows => {
                    self.word();
                    let name = self.identifier("a source name")?;
                    let locator = self.angle_text()?.trim().to_string();
                    if locator.is_empty() {
                        return self.error("empty source locator");
                    }
                    doc.sources.push(SourceDecl { name, locator });
                }
                "FUNCTIONS" if keyword_follows => {
                    self.word();
                    let name = self.identifier("a functions name")?;
                    let location = self.angle_text()?.trim().to_string();
                    doc.functions.push(FunctionsDecl { name, location });
                }
                "ITERATOR" if keyword_follows => {
                    self.word();
                    doc.iterators.push(self.iterator(None)?);
                }
                "EXPRESSION" if keyword_follows => {
                    self.word();
                    doc.expressions.push(self.expression()?);
                }
                _ => doc.shapes.push(self.shape()?),
            }
        }
    }

    fn prefix_decl(&mut self) -> PResult<PrefixDecl> {
        self.skip_trivia();
        let label = self.prefix_label()?;
        if label == "_" {
            return self.error("the prefix label '_' is reserved for blank nodes");
        }
        let iri = self.angle_text()?.trim().to_string();
        if iri.is_empty() {
            return self.error("empty prefix IRI");
        }
        Ok(PrefixDecl { label, iri })
    }

    fn iterator(&mut self, parent: Option<QueryLanguage>) -> PResult<IteratorDecl> {
        let name = self.identifier("an iterator name")?;
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let text = self.angle_text()?;
        let text = text.trim();
        let (declared, query) = split_language(text);
        let language = match (declared, parent) {
            (Some(l), Some(p)) if l != p => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(alloc::format!(
                        "nested iterator {name} uses {} but its parent uses {}",
                        l.keyword(),
                        p.keyword()
                    )),
                    line,
                    column,
                })
            }
            (Some(l), _) => l,
            (None, Some(p)) => p,
            (None, None) => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(alloc::format!(
                        "iterator {name} must declare its query language (jsonpath: or xpath:)"
                    )),
                    line,
                    column,
                })
            }
        };
        if query.is_empty() {
            return self.error(alloc::format!("iterator {name} has an empty query"));
        }
        let mut it = IteratorDecl {
            name,
            language,
            root_query: query.to_string(),
            fields: Vec::new(),
            children: Vec::new(),
        };
        self.expect('{')?;
        loop {
            self.skip_trivia();
            if self.eat('}') {
                return Ok(it);
            }
            let word = self.peek_word();
            let (line, column) = (self.line, self.column);
            let member = match word {
                "FIELD" => {
                    self.word();
                    let name = self.identifier("a field name")?;
                    let query = self.angle_text()?.trim().to_string();
                    if query.is_empty() {
                        return self.error(alloc::format!("field {name} has an empty query"));
                    }
                    let n = name.clone();
                    it.fields.push(FieldDecl { name, query });
                    n
                }
                "ITERATOR" => {
                    self.word();
                    let child = self.iterator(Some(language))?;
                    let n = child.name.clone();
                    it.children.push(child);
                    n
                }
                _ if UNSUPPORTED.contains(&word) => return self.unsupported(word),
                "" => {
                    return self.error(alloc::format!(
                        "expected FIELD, ITERATOR or '}}', found {}",
                        self.describe_next()
                    ))
                }
                other => return self.error(alloc::format!("unexpected {other:?} inside iterator")),
            };
            let clashes = it.fields.iter().filter(|f| f.name == member).count()
                + it.children.iter().filter(|c| c.name == member).count();
            if clashes > 1 {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(alloc::format!("duplicate member {member:?} in iterator {}", it.name)),
                    line,
                    column,
                });
            }
        }
    }

    fn expression(&mut self) -> PResult<ExpressionDecl> {
        let name = self.identifier("an expression name")?;
        self.expect('<')?;
        let mut branches = Vec::new();
        loop {
            let source = self.identifier("a source name")?;
            if !self.eat('.') {
                return self.error(alloc::format!(
                    "expected '.' after source {source:?}, found {}",
                    self.describe_next()
                ));
            }
            let iterator = self.identifier("an iterator name")?;
            if self.peek() == Some('.') {
                return self.error("expression branches reference top-level iterators only");
            }
            branches.push(ExpressionBranch { source, iterator });
            self.skip_trivia();
            if self.eat('>') {
                break;
            }
            let word = self.peek_word();
            if UNSUPPORTED.contains(&word) {
                return self.unsupported(word);
            }
            if word != "UNION" {
                return self.error(alloc::format!("expected UNION or '>', found {}", self.describe_next()));
            }
            self.word();
        }
        Ok(ExpressionDecl { name, branches })
    }

    fn shape(&mut self) -> PResult<ShapeDecl> {
        self.skip_trivia();
        if self.peek_word().is_empty() && self.peek() != Some(':') {
            return self.error(alloc::format!(
                "expected a declaration or shape, found {}",
                self.describe_next()
            ));
        }
        let name = self.prefixed_name()?;
        let subject = self.subject()?;
        self.expect('{')?;
        let mut statements = Vec::new();
        loop {
            self.skip_trivia();
            if self.eat('}') {
                return Ok(ShapeDecl {
                    name,
                    subject,
                    statements,
                });
            }
            statements.push(self.statement()?);
        }
    }

    fn subject(&mut self) -> PResult<SubjectSpec> {
        self.skip_trivia();
        if self.rest().starts_with("_:") {
            self.bump();
            self.bump();
            let label = self.word();
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
                return self.error("blank node labels must be alphanumeric");
            }
            return Ok(SubjectSpec::Blank(label.to_string()));
        }
        let prefix = self.prefix_label()?;
        if self.peek() == Some('[') {
            let generator = self.bracketed_generator()?;
            Ok(SubjectSpec::Generated { prefix, generator })
        } else {
            Ok(SubjectSpec::Fixed(PrefixedName::new(prefix, self.local_part())))
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let word = self.peek_word();
        let predicate = if word == "a" && self.rest()[1..].starts_with(char::is_whitespace) {
            self.word();
            Predicate::Type
        } else {
            if UNSUPPORTED.contains(&word) {
                return self.unsupported(word);
            }
            Predicate::Named(self.prefixed_name()?)
        };
        self.skip_trivia();
        let object = match self.peek() {
            Some('[') => ObjectSpec::Generated {
                prefix: None,
                generator: self.bracketed_generator()?,
            },
            Some('@') => {
                self.bump();
                ObjectSpec::ShapeLink(self.prefixed_name()?)
            }
            Some('"') => ObjectSpec::Literal(self.string_literal()?),
            Some(c) if c.is_ascii_alphabetic() || c == '_' || c == ':' => {
                let prefix = self.prefix_label()?;
                if self.peek() == Some('[') {
                    ObjectSpec::Generated {
                        prefix: Some(prefix),
                        generator: self.bracketed_generator()?,
                    }
                } else {
                    ObjectSpec::Fixed(PrefixedName::new(prefix, self.local_part()))
                }
            }
            _ => return self.error(alloc::format!("expected an object, found {}", self.describe_next())),
        };
        self.skip_trivia();
        let datatype = match self.peek() {
            Some(';') | Some('}') => None,
            _ => {
                let word = self.peek_word();
                if UNSUPPORTED.contains(&word) {
                    return self.unsupported(word);
                }
                Some(self.prefixed_name()?)
            }
        };
        self.skip_trivia();
        if !self.eat(';') && self.peek() != Some('}') {
            return self.error(alloc::format!("expected ';', found {}", self.describe_next()));
        }
        Ok(Statement {
            predicate,
            object,
            datatype,
        })
    }

    fn bracketed_generator(&mut self) -> PResult<Generator> {
        self.expect('[')?;
        let first = self.value_path()?;
        self.skip_trivia();
        let generator = if self.peek() == Some('(') {
            if first.segments.len() != 2 {
                return self.error("function calls take the form library.function(...)");
            }
            self.bump();
            let mut args = Vec::new();
            self.skip_trivia();
            if !self.eat(')') {
                loop {
                    self.skip_trivia();
                    let arg = if self.peek() == Some('"') {
                        Argument::Literal(self.string_literal()?)
                    } else {
                        Argument::Path(self.value_path()?)
                    };
                    args.push(arg);
                    self.skip_trivia();
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            let mut segments = first.segments.into_iter();
            Generator::Call(FunctionCall {
                library: segments.next().unwrap_or_default(),
                function: segments.next().unwrap_or_default(),
                args,
            })
        } else {
            Generator::Path(first)
        };
        self.skip_trivia();
        let word = self.peek_word();
        if UNSUPPORTED.contains(&word) {
            return self.unsupported(word);
        }
        self.expect(']')?;
        Ok(generator)
    }

    fn value_path(&mut self) -> PResult<ValuePath> {
        let mut segments = alloc::vec![self.identifier("a value path")?];
        while self.peek() == Some('.') {
            self.bump();
            segments.push(self.identifier("a path segment")?);
        }
        if segments.len() < 2 {
            return self.error(alloc::format!(
                "value path {:?} needs at least expression.field",
                segments[0]
            ));
        }
        Ok(ValuePath { segments })
    }
}

fn split_language(text: &str) -> (Option<QueryLanguage>, &str) {
    for lang in [QueryLanguage::JsonPath, QueryLanguage::XPath] {
        let kw = lang.keyword();
        if text.len() > kw.len()
            && text.is_char_boundary(kw.len())
            && text[..kw.len()].eq_ignore_ascii_case(kw)
            && text[kw.len()..].starts_with(':')
        {
            return (Some(lang), text[kw.len() + 1..].trim());
        }
    }
    (None, text)
}
