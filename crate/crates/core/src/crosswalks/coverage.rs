use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{CrosswalkTemplate, InstantiateError, TemplateId};
use crate::dsl::{
    parse_mapping, Argument, Generator, IteratorDecl, MappingDocument, ObjectSpec, ParseError, Predicate,
    QueryLanguage, ValuePath,
};

/// One attribute correspondence: a CodeMeta attribute of a class, the
/// provider attribute feeding it, and the template statement that
/// implements it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageRow {
    pub template: TemplateId,
    pub class: String,
    /// Shape in the template holding the statement.
    pub shape: String,
    /// Predicate as written in the template, e.g. `schema:name`.
    pub attribute: String,
    /// Provider attribute as documented (`.` for JSON children, `/` for
    /// XML children), `User` for values written in the mapping, or the
    /// linked class.
    pub provider: String,
    /// Normalized statement object; see [`statement_bindings`].
    pub binding: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Table {
    rows: Vec<CoverageRow>,
}

const TABLE: &str = include_str!("../../data/crosswalk_table.json");

/// The bundled coverage table, in file order.
pub fn list_crosswalk_coverage() -> Vec<CoverageRow> {
    serde_json::from_str::<Table>(TABLE).map(|t| t.rows).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StatementBinding {
    pub shape: String,
    pub attribute: String,
    pub binding: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CoverageError {
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Every non-type statement of the template instantiated with its
/// defaults. Bindings render the object:
///
/// * `"text"` for literals, `@ex:Shape` for links, `p:local` for fixed IRIs;
/// * `src:query` for a value path, one per union branch declaring the
///   field, joined by ` | `; the query is the iterator chain plus the
///   field query, with `node()[local-name(.)='x']` steps shortened to `x`;
/// * `lib.fn(arg, ...)` for function calls;
/// * a `prefix:` in front of IRI generators.
pub fn statement_bindings(id: TemplateId) -> Result<Vec<StatementBinding>, CoverageError> {
    let t = CrosswalkTemplate::get(id);
    let doc = parse_mapping(&t.instantiate(&t.default_params())?)?;
    let mut out = Vec::new();
    for shape in &doc.shapes {
        for st in &shape.statements {
            let Predicate::Named(p) = &st.predicate else { continue };
            let binding = match &st.object {
                ObjectSpec::Literal(s) => format!("{s:?}"),
                ObjectSpec::ShapeLink(n) => format!("@{n}"),
                ObjectSpec::Fixed(n) => format!("{n}"),
                ObjectSpec::Generated { prefix, generator } => {
                    let g = render_generator(&doc, generator);
                    match prefix {
                        Some(pre) => format!("{pre}:{g}"),
                        None => g,
                    }
                }
            };
            out.push(StatementBinding {
                shape: format!("{}", shape.name),
                attribute: format!("{p}"),
                binding,
            });
        }
    }
    Ok(out)
}

fn render_generator(doc: &MappingDocument, g: &Generator) -> String {
    match g {
        Generator::Path(p) => render_path(doc, p),
        Generator::Call(call) => {
            let args: Vec<String> = call
                .args
                .iter()
                .map(|a| match a {
                    Argument::Path(p) => render_path(doc, p),
                    Argument::Literal(s) => format!("{s:?}"),
                })
                .collect();
            format!("{}.{}({})", call.library, call.function, args.join(", "))
        }
    }
}

fn render_path(doc: &MappingDocument, p: &ValuePath) -> String {
    let Some(expr) = doc.expressions.iter().find(|e| e.name == p.expression()) else {
        return format!("{p}");
    };
    let mut alternatives = Vec::new();
    for branch in &expr.branches {
        let Some(root) = doc.iterators.iter().find(|i| i.name == branch.iterator) else {
            continue;
        };
        let mut chain: Vec<&IteratorDecl> = alloc::vec![root];
        let mut it = root;
        let mut ok = true;
        for name in p.iterator_path() {
            match it.child(name) {
                Some(c) => {
                    chain.push(c);
                    it = c;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let Some(field) = it.field(p.field()).filter(|_| ok) else {
            continue;
        };
        let mut parts: Vec<String> = chain.iter().map(|i| normalize(root.language, &i.root_query)).collect();
        parts.push(normalize(root.language, &field.query));
        parts.retain(|s| !s.is_empty());
        let sep = match root.language {
            QueryLanguage::XPath => "/",
            QueryLanguage::JsonPath => ".",
        };
        let joined = parts.join(sep).replace(".[", "[");
        alternatives.push(format!("{}:{joined}", branch.source));
    }
    alternatives.join(" | ")
}

fn normalize(lang: QueryLanguage, q: &str) -> String {
    match lang {
        QueryLanguage::JsonPath => {
            let q = q.strip_prefix('$').unwrap_or(q);
            q.strip_prefix('.').unwrap_or(q).into()
        }
        QueryLanguage::XPath => {
            let mut s = String::from(q.trim_start_matches('/'));
            while let Some(i) = s.find("node()[local-name(.)='") {
                let start = i + "node()[local-name(.)='".len();
                let Some(len) = s[start..].find("']") else { break };
                let name = String::from(&s[start..start + len]);
                s.replace_range(i..start + len + 2, &name);
            }
            s
        }
    }
}

/// Rows and statements that are not matched one to one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub unmatched_rows: Vec<CoverageRow>,
    pub unmatched_statements: Vec<StatementBinding>,
}

impl CoverageReport {
    pub fn is_bijection(&self) -> bool {
        self.unmatched_rows.is_empty() && self.unmatched_statements.is_empty()
    }
}

/// Pairs the coverage rows of `id` with its template statements; each row
/// must consume exactly one statement with the same shape, attribute and
/// binding.
pub fn check_coverage(id: TemplateId) -> Result<CoverageReport, CoverageError> {
    let mut statements: BTreeMap<StatementBinding, usize> = BTreeMap::new();
    for s in statement_bindings(id)? {
        *statements.entry(s).or_default() += 1;
    }
    let mut report = CoverageReport::default();
    for row in list_crosswalk_coverage().into_iter().filter(|r| r.template == id) {
        let key = StatementBinding {
            shape: row.shape.clone(),
            attribute: row.attribute.clone(),
            binding: row.binding.clone(),
        };
        match statements.get_mut(&key) {
            Some(n) if *n > 0 => *n -= 1,
            _ => report.unmatched_rows.push(row),
        }
    }
    for (s, n) in statements {
        for _ in 0..n {
            report.unmatched_statements.push(s.clone());
        }
    }
    Ok(report)
}
