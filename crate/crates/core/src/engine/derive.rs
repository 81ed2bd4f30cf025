//! Compound structure derived from statement units rather than stored explicitly.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::model::*;
use crate::spec::{is_identification_instance, Spec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeriveError {
    #[error("nothing in the store is identified by {0}")]
    UnknownSeed(Upri),
    #[error("{0} does not express a partial order: {1}")]
    NotPartialOrder(Upri, String),
    #[error("{} compounds are stored, not derived", .0.as_str())]
    NotDerivable(CompoundKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedItem {
    pub subject: Upri,
    pub units: BTreeSet<Upri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedItemGroup {
    /// Subject resources of the member items.
    pub items: BTreeSet<Upri>,
    pub units: BTreeSet<Upri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GranularityTree {
    /// KGBB instance whose statements form the tree.
    pub relation: Upri,
    pub root: Upri,
    pub nodes: BTreeSet<Upri>,
    /// `(parent, child, statement unit)` triples.
    pub edges: Vec<(Upri, Upri, Upri)>,
    pub units: BTreeSet<Upri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedContext {
    pub resources: BTreeSet<Upri>,
    pub units: BTreeSet<Upri>,
}

fn is_structural(s: &StatementUnit) -> bool {
    !s.meta.is_deleted() && !is_identification_instance(&s.meta.kgbb_uri)
}

fn is_about(spec: &Spec, s: &StatementUnit) -> bool {
    spec.statement_class(&s.meta.kgbb_uri)
        .and_then(|c| c.predicate.as_ref())
        .and_then(|p| p.iri.as_ref())
        .is_some_and(|iri| iri.as_str() == vocab::IS_ABOUT)
}

/// Resource objects of a statement that denote particulars rather than terminology.
fn object_resources<'s>(spec: &'s Spec, store: &'s Store, s: &'s StatementUnit) -> impl Iterator<Item = &'s Upri> + 's {
    s.current_positions().filter_map(|p| p.input.as_resource()).filter(move |r| {
        !spec.ontology.contains(r) && store.resource(r).is_none_or(|res| res.kind != ResourceKind::Class)
    })
}

/// Live statement units sharing one subject resource.
pub fn derive_item(store: &Store, subject: &Upri) -> DerivedItem {
    let units = store.live_statements().filter(|s| s.subject() == subject).map(|s| s.meta.upri.clone()).collect();
    DerivedItem { subject: subject.clone(), units }
}

/// Items connected through statements whose object is the subject of another item, in both directions.
pub fn derive_item_group(store: &Store, spec: &Spec, seed: &Upri) -> DerivedItemGroup {
    let mut adjacent: BTreeMap<&Upri, BTreeSet<&Upri>> = BTreeMap::new();
    let subjects: BTreeSet<&Upri> = store.live_statements().map(StatementUnit::subject).collect();
    for s in store.live_statements().filter(|s| is_structural(s)) {
        for o in object_resources(spec, store, s).filter(|o| subjects.contains(o)) {
            adjacent.entry(s.subject()).or_default().insert(o);
            adjacent.entry(o).or_default().insert(s.subject());
        }
    }
    let mut items = BTreeSet::new();
    let mut queue = vec![seed];
    while let Some(next) = queue.pop() {
        if items.insert(next.clone()) {
            queue.extend(adjacent.get(next).into_iter().flatten().copied());
        }
    }
    let units = store.live_statements().filter(|s| items.contains(s.subject())).map(|s| s.meta.upri.clone()).collect();
    DerivedItemGroup { items, units }
}

fn transitive_position(spec: &Spec, kgbb: &Upri) -> Option<Upri> {
    spec.statement_class(kgbb)?
        .positions
        .iter()
        .find(|p| p.logical_properties.contains(&LogicalProperty::Transitive))
        .map(|p| p.id.clone())
}

/// Trees of transitive statements, one per root, optionally limited to one KGBB instance.
///
/// A root is a node that never appears as the object of a statement of the same relation.
pub fn derive_granularity_trees(store: &Store, spec: &Spec, relation: Option<&Upri>) -> Result<Vec<GranularityTree>, DeriveError> {
    if let Some(r) = relation {
        if transitive_position(spec, r).is_none() {
            return Err(DeriveError::NotPartialOrder(r.clone(), "no object position is declared transitive".into()));
        }
    }
    let mut by_relation: BTreeMap<Upri, Vec<(Upri, Upri, Upri)>> = BTreeMap::new();
    for s in store.live_statements().filter(|s| !s.negated && is_structural(s)) {
        let kgbb = &s.meta.kgbb_uri;
        if relation.is_some_and(|r| r != kgbb) {
            continue;
        }
        let Some(pos) = transitive_position(spec, kgbb) else { continue };
        if let Some(o) = s.current(&pos).and_then(|p| p.input.as_resource()) {
            by_relation.entry(kgbb.clone()).or_default().push((s.subject().clone(), o.clone(), s.meta.upri.clone()));
        }
    }
    let mut trees = Vec::new();
    for (rel, edges) in by_relation {
        let mut children: BTreeMap<&Upri, Vec<&(Upri, Upri, Upri)>> = BTreeMap::new();
        for e in &edges {
            children.entry(&e.0).or_default().push(e);
        }
        let targets: BTreeSet<&Upri> = edges.iter().map(|e| &e.1).collect();
        let roots: BTreeSet<&Upri> = edges.iter().map(|e| &e.0).filter(|s| !targets.contains(s)).collect();
        find_cycle(&rel, &children)?;
        for root in roots {
            let mut tree = GranularityTree {
                relation: rel.clone(),
                root: root.clone(),
                nodes: BTreeSet::from([root.clone()]),
                edges: Vec::new(),
                units: BTreeSet::new(),
            };
            let mut queue = vec![root];
            while let Some(n) = queue.pop() {
                for e in children.get(n).into_iter().flatten() {
                    if tree.units.insert(e.2.clone()) {
                        tree.edges.push((*e).clone());
                        if tree.nodes.insert(e.1.clone()) {
                            queue.push(&e.1);
                        }
                    }
                }
            }
            trees.push(tree);
        }
    }
    Ok(trees)
}

fn find_cycle(rel: &Upri, children: &BTreeMap<&Upri, Vec<&(Upri, Upri, Upri)>>) -> Result<(), DeriveError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        n: &'a Upri,
        children: &BTreeMap<&'a Upri, Vec<&'a (Upri, Upri, Upri)>>,
        marks: &mut BTreeMap<&'a Upri, Mark>,
    ) -> Option<&'a Upri> {
        match marks.get(n) {
            Some(Mark::Open) => return Some(n),
            Some(Mark::Done) => return None,
            None => {}
        }
        marks.insert(n, Mark::Open);
        for e in children.get(n).into_iter().flatten() {
            if let Some(c) = visit(&e.1, children, marks) {
                return Some(c);
            }
        }
        marks.insert(n, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for n in children.keys() {
        if let Some(c) = visit(n, children, &mut marks) {
            return Err(DeriveError::NotPartialOrder(rel.clone(), format!("cycle through {c}")));
        }
    }
    Ok(())
}

/// Connected components of the merged data graphs, split at is-about statements.
///
/// An is-about statement joins the context of its subject (the information artifact);
/// its object starts a separate context.
pub fn derive_contexts(store: &Store, spec: &Spec) -> Vec<DerivedContext> {
    let mut parent: BTreeMap<Upri, Upri> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<Upri, Upri>, x: &Upri) -> Upri {
        let p = parent.entry(x.clone()).or_insert_with(|| x.clone()).clone();
        if &p == x {
            return p;
        }
        let root = find(parent, &p);
        parent.insert(x.clone(), root.clone());
        root
    }
    fn union(parent: &mut BTreeMap<Upri, Upri>, a: &Upri, b: &Upri) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent.insert(rb, ra);
        }
    }
    let statements: Vec<&StatementUnit> = store.live_statements().filter(|s| is_structural(s)).collect();
    for s in &statements {
        find(&mut parent, s.subject());
        let objects: Vec<&Upri> = object_resources(spec, store, s).collect();
        for o in objects {
            if is_about(spec, s) {
                find(&mut parent, o);
            } else {
                union(&mut parent, s.subject(), o);
            }
        }
    }
    let mut groups: BTreeMap<Upri, DerivedContext> = BTreeMap::new();
    let nodes: Vec<Upri> = parent.keys().cloned().collect();
    for n in nodes {
        let root = find(&mut parent, &n);
        groups.entry(root).or_insert_with(|| DerivedContext { resources: BTreeSet::new(), units: BTreeSet::new() }).resources.insert(n);
    }
    for s in statements {
        let root = find(&mut parent, s.subject());
        groups.get_mut(&root).expect("every subject is a node").units.insert(s.meta.upri.clone());
    }
    groups.into_values().collect()
}

/// Membership of the derived compound of `kind` that contains `seed`.
///
/// `seed` is a resource or a statement unit; a statement unit stands for its subject,
/// and for granularity trees also fixes the relation.
pub fn derive_compound(store: &Store, spec: &Spec, seed: &Upri, kind: CompoundKind) -> Result<BTreeSet<Upri>, DeriveError> {
    let seed_unit = store.statement(seed);
    let subject = match seed_unit {
        Some(s) => s.subject().clone(),
        None if store.resource(seed).is_some() || store.live_statements().any(|s| s.subject() == seed) => seed.clone(),
        None => return Err(DeriveError::UnknownSeed(seed.clone())),
    };
    match kind {
        CompoundKind::Item => Ok(derive_item(store, &subject).units),
        CompoundKind::ItemGroup => Ok(derive_item_group(store, spec, &subject).units),
        CompoundKind::GranularityTree => {
            let relation = seed_unit.map(|s| &s.meta.kgbb_uri);
            let trees = derive_granularity_trees(store, spec, relation)?;
            Ok(trees
                .into_iter()
                .filter(|t| match seed_unit {
                    Some(s) => t.units.contains(&s.meta.upri),
                    None => t.nodes.contains(&subject),
                })
                .flat_map(|t| t.units)
                .collect())
        }
        CompoundKind::Context => Ok(derive_contexts(store, spec)
            .into_iter()
            .filter(|c| match seed_unit {
                Some(s) => c.units.contains(&s.meta.upri),
                None => c.resources.contains(&subject),
            })
            .flat_map(|c| c.units)
            .collect()),
        k => Err(DeriveError::NotDerivable(k)),
    }
}
