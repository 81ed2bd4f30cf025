//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, NaiveDate, Utc};
use kgbb_core::spec::Spec;
use kgbb_core::*;

fn ancestors(spec: &Spec, class: &Upri) -> BTreeSet<Upri> {
    let parents: BTreeMap<&Upri, &Vec<Upri>> = spec.ontology.classes().map(|c| (&c.id, &c.parents)).collect();
    let mut seen = BTreeSet::from([class.clone()]);
    let mut stack = vec![class.clone()];
    while let Some(c) = stack.pop() {
        for p in parents.get(&c).map(|v| v.as_slice()).unwrap_or_default() {
            if seen.insert(p.clone()) {
                stack.push(p.clone());
            }
        }
    }
    seen
}

fn class_of(store: &Store, spec: &Spec, r: &Upri) -> Option<Upri> {
    if let Some(res) = store.resources.get(r) {
        return match (res.kind, &res.class_affiliation) {
            (_, Some(c)) => Some(c.clone()),
            (ResourceKind::Class, None) => Some(r.clone()),
            _ => None,
        };
    }
    spec.ontology.classes().any(|c| &c.id == r).then(|| r.clone())
}

fn instant(l: &Literal) -> Option<DateTime<Utc>> {
    match l.datatype() {
        Datatype::DateTime => DateTime::parse_from_rfc3339(l.value()).ok().map(|d| d.to_utc()),
        Datatype::Date => NaiveDate::parse_from_str(l.value(), "%Y-%m-%d").ok().and_then(|d| d.and_hms_opt(0, 0, 0)).map(|d| d.and_utc()),
        _ => None,
    }
}

fn number(l: &Literal) -> Option<f64> {
    matches!(l.datatype(), Datatype::Integer | Datatype::Decimal | Datatype::Float).then(|| l.value().parse().ok()).flatten()
}

fn order(a: &Literal, b: &Literal) -> Option<Ordering> {
    match (number(a), number(b), instant(a), instant(b)) {
        (Some(x), Some(y), _, _) => x.partial_cmp(&y),
        (_, _, Some(x), Some(y)) => Some(x.cmp(&y)),
        _ if a.datatype() == b.datatype() => Some(a.value().cmp(b.value())),
        _ => None,
    }
}

fn literal_ok(spec: &LiteralSpec, l: &Literal) -> bool {
    spec.datatype.is_none_or(|d| d == l.datatype())
        && spec.exact.as_ref().is_none_or(|e| order(l, e) == Some(Ordering::Equal))
        && spec.min.as_ref().is_none_or(|m| matches!(order(l, m), Some(Ordering::Greater | Ordering::Equal)))
        && spec.max.as_ref().is_none_or(|m| matches!(order(l, m), Some(Ordering::Less | Ordering::Equal)))
        && spec.year.is_none_or(|y| instant(l).map(|d| d.format("%Y").to_string()) == Some(format!("{y:04}")))
        && spec.pattern.as_ref().is_none_or(|p| regex::Regex::new(p).is_ok_and(|re| re.is_match(l.value())))
}

fn binding_ok(store: &Store, spec: &Spec, b: &Binding, v: &ObjectInput) -> bool {
    match (b, v) {
        (Binding::Exact(e), ObjectInput::Resource(r)) => e == r,
        (Binding::SomeInstanceOf(c) | Binding::EveryInstanceOf(c) | Binding::Class(c), ObjectInput::Resource(r)) => {
            class_of(store, spec, r).is_some_and(|k| ancestors(spec, &k).contains(c))
        }
        (Binding::Literal(ls), ObjectInput::Literal(l)) => literal_ok(ls, l),
        _ => false,
    }
}

/// Full scan over every stored unit, re-deriving class membership from the raw ontology.
pub fn oracle_answer(store: &Store, spec: &Spec, q: &QuestionUnit) -> BTreeSet<Upri> {
    let mut out = BTreeSet::new();
    for unit in store.units.values() {
        let SemanticUnit::Statement(s) = unit else { continue };
        if s.meta.deleted_by.is_some() || s.negated || s.meta.kgbb_uri != q.statement_kgbb {
            continue;
        }
        let subject = ObjectInput::Resource(s.meta.subject.clone().unwrap());
        if q.subject_binding.as_ref().is_some_and(|b| !binding_ok(store, spec, b, &subject)) {
            continue;
        }
        let all = q.bindings.iter().all(|(pos, b)| {
            let current: Vec<&ObjectPositionInstance> =
                s.positions.values().filter(|p| &p.position_class == pos && p.current_version).collect();
            current.len() == 1 && binding_ok(store, spec, b, &current[0].input)
        });
        if all {
            out.insert(s.meta.upri.clone());
        }
    }
    out
}

pub fn oracle_tree(store: &Store, spec: &Spec, tree: &QuestionTree) -> BTreeSet<Upri> {
    match tree {
        QuestionTree::Question(id) => oracle_answer(store, spec, store.units[id].as_question().unwrap()),
        QuestionTree::And(c) => {
            let sets: Vec<BTreeSet<Upri>> = c.iter().map(|t| oracle_tree(store, spec, t)).collect();
            sets[0].iter().filter(|u| sets.iter().all(|s| s.contains(*u))).cloned().collect()
        }
        QuestionTree::Or(c) => c.iter().flat_map(|t| oracle_tree(store, spec, t)).collect(),
    }
}

/// Data triples owned by more than one statement unit, and positions with several current instances.
pub fn partition_violations(store: &Store) -> Vec<String> {
    let mut owner: BTreeMap<Triple, Upri> = BTreeMap::new();
    let mut problems = Vec::new();
    for s in store.statements() {
        for t in s.data_graph() {
            if let Some(prev) = owner.insert(t.clone(), s.meta.upri.clone()) {
                if prev != s.meta.upri {
                    problems.push(format!("{t} in {prev} and {}", s.meta.upri));
                }
            }
        }
        let mut current: BTreeMap<&Upri, usize> = BTreeMap::new();
        for p in s.positions.values().filter(|p| p.current_version) {
            *current.entry(&p.position_class).or_default() += 1;
        }
        for (class, n) in current.into_iter().filter(|(_, n)| *n > 1) {
            problems.push(format!("{} has {n} current instances of {class}", s.meta.upri));
        }
    }
    let total: usize = store.statements().map(|s| s.data_graph().len()).sum();
    if total != owner.len() && problems.is_empty() {
        problems.push(format!("{} data triples but {} distinct", total, owner.len()));
    }
    problems
}

/// Canonical byte form of a store for identity checks.
pub fn canonical(store: &Store) -> String {
    serde_json::to_string(store).unwrap()
}
