use alloc::string::String;
use core::fmt::Write;

use super::ast::*;

/// Canonical text for a document: declarations grouped by kind, four-space
/// indentation, one statement per line. Parsing the output yields an AST
/// equal to the input.
pub fn print_mapping(doc: &MappingDocument) -> String {
    let mut out = String::new();
    for p in &doc.prefixes {
        let _ = writeln!(out, "PREFIX {}: <{}>", p.label, escape_angle(&p.iri));
    }
    for s in &doc.sources {
        let _ = writeln!(out, "SOURCE {} <{}>", s.name, escape_angle(&s.locator));
    }
    for f in &doc.functions {
        let _ = writeln!(out, "FUNCTIONS {} <{}>", f.name, escape_angle(&f.location));
    }
    for it in &doc.iterators {
        print_iterator(&mut out, it, 0);
    }
    for e in &doc.expressions {
        let _ = write!(out, "EXPRESSION {} <", e.name);
        for (i, b) in e.branches.iter().enumerate() {
            if i > 0 {
                out.push_str(" UNION ");
            }
            let _ = write!(out, "{}.{}", b.source, b.iterator);
        }
        out.push_str(">\n");
    }
    for shape in &doc.shapes {
        out.push('\n');
        let _ = write!(out, "{} ", shape.name);
        match &shape.subject {
            SubjectSpec::Generated { prefix, generator } => {
                let _ = write!(out, "{prefix}:");
                print_generator(&mut out, generator);
            }
            SubjectSpec::Blank(label) => {
                let _ = write!(out, "_:{label}");
            }
            SubjectSpec::Fixed(name) => {
                let _ = write!(out, "{name}");
            }
        }
        out.push_str(" {\n");
        for st in &shape.statements {
            out.push_str("    ");
            match &st.predicate {
                Predicate::Type => out.push('a'),
                Predicate::Named(name) => {
                    let _ = write!(out, "{name}");
                }
            }
            out.push(' ');
            match &st.object {
                ObjectSpec::Generated { prefix, generator } => {
                    if let Some(prefix) = prefix {
                        let _ = write!(out, "{prefix}:");
                    }
                    print_generator(&mut out, generator);
                }
                ObjectSpec::ShapeLink(name) => {
                    let _ = write!(out, "@{name}");
                }
                ObjectSpec::Literal(text) => print_string(&mut out, text),
                ObjectSpec::Fixed(name) => {
                    let _ = write!(out, "{name}");
                }
            }
            if let Some(dt) = &st.datatype {
                let _ = write!(out, " {dt}");
            }
            out.push_str(" ;\n");
        }
        out.push_str("}\n");
    }
    out
}

fn print_iterator(out: &mut String, it: &IteratorDecl, depth: usize) {
    let pad = "    ".repeat(depth);
    let _ = writeln!(
        out,
        "{pad}ITERATOR {} <{}: {}> {{",
        it.name,
        it.language.keyword(),
        escape_angle(&it.root_query)
    );
    for f in &it.fields {
        let _ = writeln!(out, "{pad}    FIELD {} <{}>", f.name, escape_angle(&f.query));
    }
    for child in &it.children {
        print_iterator(out, child, depth + 1);
    }
    let _ = writeln!(out, "{pad}}}");
}

fn print_generator(out: &mut String, generator: &Generator) {
    out.push('[');
    match generator {
        Generator::Path(p) => {
            let _ = write!(out, "{p}");
        }
        Generator::Call(call) => {
            let _ = write!(out, "{}.{}(", call.library, call.function);
            for (i, arg) in call.args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                match arg {
                    Argument::Path(p) => {
                        let _ = write!(out, "{p}");
                    }
                    Argument::Literal(s) => print_string(out, s),
                }
            }
            out.push(')');
        }
    }
    out.push(']');
}

fn print_string(out: &mut String, text: &str) {
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn escape_angle(text: &str) -> String {
    text.replace('\\', "\\\\").replace('>', "\\>")
}
