//! Expression evaluation into binding tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dsl::{IteratorDecl, ResolvedMapping, ValuePath};
use crate::query::{self, NodeHandle, QueryError, SourceDocument};

/// One iterator match. Root matches have no parent; nested iterator matches
/// point at the row they were evaluated under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingRow {
    pub id: usize,
    /// Index of the UNION branch that produced the row.
    pub branch: usize,
    pub parent: Option<usize>,
    /// Nested iterator names below the branch's top-level iterator.
    pub iterator_path: Vec<String>,
    /// Qualified field path (`expr.field`, `expr.child.field`) to values.
    /// A missing key means no data.
    pub fields: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    pub expression: String,
    /// `source.iterator` per branch.
    pub branches: Vec<String>,
    pub rows: Vec<BindingRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown expression {0:?}")]
    UnknownExpression(String),
    #[error("expression {expression}, branch {branch}: source document not loaded")]
    MissingSource { expression: String, branch: String },
    #[error("expression {expression}, branch {branch}: {error}")]
    Query {
        expression: String,
        branch: String,
        error: QueryError,
    },
}

impl BindingTable {
    pub fn row(&self, id: usize) -> Option<&BindingRow> {
        self.rows.get(id)
    }

    /// Rows at a nesting level, in document order.
    pub fn rows_at<'a>(&'a self, level: &'a [String]) -> impl Iterator<Item = &'a BindingRow> + 'a {
        self.rows.iter().filter(move |r| r.iterator_path == level)
    }

    pub fn is_ancestor_or_self(&self, ancestor: usize, row: usize) -> bool {
        let mut cur = Some(row);
        while let Some(r) = cur {
            if r == ancestor {
                return true;
            }
            cur = self.rows.get(r).and_then(|x| x.parent);
        }
        false
    }

    /// Rows at `level` visible from `row`: climb to the nearest
    /// ancestor-or-self whose level encloses `level`, then take every row at
    /// `level` below it.
    pub fn scope_rows(&self, row: usize, level: &[String]) -> Vec<usize> {
        let mut anchor = row;
        while let Some(r) = self.rows.get(anchor) {
            if level.starts_with(&r.iterator_path) {
                break;
            }
            match r.parent {
                Some(p) => anchor = p,
                None => return Vec::new(),
            }
        }
        self.rows
            .iter()
            .filter(|r| r.iterator_path == level && self.is_ancestor_or_self(anchor, r.id))
            .map(|r| r.id)
            .collect()
    }

    /// Values of `path` as seen from `row`.
    pub fn values_in_scope(&self, path: &ValuePath, row: usize) -> Vec<&str> {
        let key = path.to_string();
        self.scope_rows(row, path.iterator_path())
            .into_iter()
            .filter_map(|id| self.rows[id].fields.get(&key))
            .flatten()
            .map(String::as_str)
            .collect()
    }

    /// Every value of `path` across all rows.
    pub fn all_values(&self, path: &ValuePath) -> Vec<&str> {
        let key = path.to_string();
        self.rows
            .iter()
            .filter_map(|r| r.fields.get(&key))
            .flatten()
            .map(String::as_str)
            .collect()
    }
}

pub fn evaluate_expression(
    mapping: &ResolvedMapping,
    expr_name: &str,
    docs: &BTreeMap<String, SourceDocument>,
) -> Result<BindingTable, EvalError> {
    let expr = mapping
        .expression(expr_name)
        .ok_or_else(|| EvalError::UnknownExpression(expr_name.into()))?;
    let mut table = BindingTable {
        expression: expr.name.clone(),
        branches: expr
            .branches
            .iter()
            .map(|b| format!("{}.{}", b.source, b.iterator))
            .collect(),
        rows: Vec::new(),
    };
    for (index, branch) in expr.branches.iter().enumerate() {
        let label = &table.branches[index];
        let missing = || EvalError::MissingSource {
            expression: expr.name.clone(),
            branch: label.clone(),
        };
        let doc = docs.get(&branch.source).ok_or_else(missing)?;
        let iterator = mapping.iterator(&branch.iterator).ok_or_else(missing)?;
        let mut ctx = Ctx {
            doc,
            expression: &expr.name,
            branch: index,
            rows: Vec::new(),
        };
        let result = query::evaluate(iterator.language, &iterator.root_query, doc, None).and_then(|roots| {
            for node in roots.nodes() {
                ctx.add_row(iterator, node, None, &mut Vec::new(), table.rows.len())?;
            }
            Ok(())
        });
        result.map_err(|error| EvalError::Query {
            expression: expr.name.clone(),
            branch: label.clone(),
            error,
        })?;
        table.rows.extend(ctx.rows);
    }
    Ok(table)
}

struct Ctx<'a> {
    doc: &'a SourceDocument,
    expression: &'a str,
    branch: usize,
    rows: Vec<BindingRow>,
}

impl Ctx<'_> {
    fn add_row(
        &mut self,
        iterator: &IteratorDecl,
        node: &NodeHandle,
        parent: Option<usize>,
        path: &mut Vec<String>,
        offset: usize,
    ) -> Result<(), QueryError> {
        let id = offset + self.rows.len();
        let mut fields = BTreeMap::new();
        for field in &iterator.fields {
            let set = query::evaluate(iterator.language, &field.query, self.doc, Some(node))?;
            let values = self.doc.scalar_values(&set);
            if !values.is_empty() {
                let mut key = String::from(self.expression);
                for seg in path.iter() {
                    key.push('.');
                    key.push_str(seg);
                }
                key.push('.');
                key.push_str(&field.name);
                fields.insert(key, values);
            }
        }
        self.rows.push(BindingRow {
            id,
            branch: self.branch,
            parent,
            iterator_path: path.clone(),
            fields,
        });
        for child in &iterator.children {
            let matches = query::evaluate(child.language, &child.root_query, self.doc, Some(node))?;
            path.push(child.name.clone());
            for sub in matches.nodes() {
                self.add_row(child, sub, Some(id), path, offset)?;
            }
            path.pop();
        }
        Ok(())
    }
}
