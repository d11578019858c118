//! Graph comparison up to blank-node relabeling.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{RdfGraph, Term, Triple};

fn blanks(g: &RdfGraph) -> BTreeSet<Term> {
    g.iter()
        .flat_map(|t| [t.subject(), t.object()])
        .filter(|t| matches!(t, Term::Blank(_)))
        .cloned()
        .collect()
}

/// Colour refinement: each blank node's colour summarises its neighbourhood.
fn colours(g: &RdfGraph, nodes: &BTreeSet<Term>) -> BTreeMap<Term, String> {
    let show = |t: &Term, colours: &BTreeMap<Term, String>| match t {
        Term::Blank(_) => format!("_{}", colours.get(t).map(String::as_str).unwrap_or("")),
        other => format!("{other}"),
    };
    let mut colours: BTreeMap<Term, String> = nodes.iter().map(|n| (n.clone(), String::new())).collect();
    for _ in 0..4 {
        let mut next = BTreeMap::new();
        for n in nodes {
            let mut parts: Vec<String> = g
                .iter()
                .filter_map(|t| {
                    if t.subject() == n {
                        Some(format!("+{} {}", t.predicate_iri(), show(t.object(), &colours)))
                    } else if t.object() == n {
                        Some(format!("-{} {}", t.predicate_iri(), show(t.subject(), &colours)))
                    } else {
                        None
                    }
                })
                .collect();
            parts.sort();
            let mut digest = parts.join("|");
            if digest.len() > 4096 {
                digest.truncate(4096);
            }
            next.insert(n.clone(), digest);
        }
        colours = next;
    }
    colours
}

fn map_term(t: &Term, m: &BTreeMap<Term, Term>) -> Option<Term> {
    match t {
        Term::Blank(_) => m.get(t).cloned(),
        other => Some(other.clone()),
    }
}

/// Whether `a` and `b` are equal up to a bijective renaming of blank nodes.
pub fn isomorphic(a: &RdfGraph, b: &RdfGraph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ba, bb) = (blanks(a), blanks(b));
    if ba.len() != bb.len() {
        return false;
    }
    let ground = |g: &RdfGraph| -> BTreeSet<Triple> {
        g.iter()
            .filter(|t| !matches!(t.subject(), Term::Blank(_)) && !matches!(t.object(), Term::Blank(_)))
            .cloned()
            .collect()
    };
    if ground(a) != ground(b) {
        return false;
    }
    let (ca, cb) = (colours(a, &ba), colours(b, &bb));
    let mut count_a: BTreeMap<&String, usize> = BTreeMap::new();
    let mut count_b: BTreeMap<&String, usize> = BTreeMap::new();
    ca.values().for_each(|c| *count_a.entry(c).or_default() += 1);
    cb.values().for_each(|c| *count_b.entry(c).or_default() += 1);
    if count_a != count_b {
        return false;
    }
    let order: Vec<Term> = ba.iter().cloned().collect();
    let mut mapping = BTreeMap::new();
    let mut used = BTreeSet::new();
    search(a, b, &order, &ca, &cb, &mut mapping, &mut used)
}

fn consistent(a: &RdfGraph, b: &RdfGraph, m: &BTreeMap<Term, Term>, node: &Term) -> bool {
    a.iter().filter(|t| t.subject() == node || t.object() == node).all(|t| {
        match (map_term(t.subject(), m), map_term(t.object(), m)) {
            (Some(s), Some(o)) => Triple::new(s, t.predicate().clone(), o).is_ok_and(|x| b.contains(&x)),
            _ => true,
        }
    })
}

fn search(
    a: &RdfGraph,
    b: &RdfGraph,
    order: &[Term],
    ca: &BTreeMap<Term, String>,
    cb: &BTreeMap<Term, String>,
    mapping: &mut BTreeMap<Term, Term>,
    used: &mut BTreeSet<Term>,
) -> bool {
    let Some((node, rest)) = order.split_first() else {
        return a.iter().all(
            |t| match (map_term(t.subject(), mapping), map_term(t.object(), mapping)) {
                (Some(s), Some(o)) => Triple::new(s, t.predicate().clone(), o).is_ok_and(|x| b.contains(&x)),
                _ => false,
            },
        );
    };
    for (candidate, colour) in cb {
        if used.contains(candidate) || ca.get(node) != Some(colour) {
            continue;
        }
        mapping.insert(node.clone(), candidate.clone());
        used.insert(candidate.clone());
        if consistent(a, b, mapping, node) && search(a, b, rest, ca, cb, mapping, used) {
            return true;
        }
        mapping.remove(node);
        used.remove(candidate);
    }
    false
}
