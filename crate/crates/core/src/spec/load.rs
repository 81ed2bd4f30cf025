use std::collections::{BTreeMap, BTreeSet};

use super::builtin::builtin_classes;
use super::ontology::OntologyProblem;
use super::*;
use crate::model::{Literal, Upri};

use DiagnosticCode as C;

pub(super) fn load(text: &str) -> Result<Spec, SpecError> {
    let doc: SpecDocument = serde_yaml::from_str(text).map_err(|e| {
        let (line, column) = e.location().map(|l| (l.line(), l.column())).unwrap_or((0, 0));
        SpecError::Parse { line, column, message: e.to_string() }
    })?;
    from_document(doc)
}

pub(super) fn from_document(doc: SpecDocument) -> Result<Spec, SpecError> {
    let mut diags = Vec::new();

    let ontology = match Ontology::new(&doc.ontology) {
        Ok(o) => o,
        Err(problems) => {
            for p in problems {
                diags.push(match p {
                    OntologyProblem::UnknownParent { class, parent } => {
                        Diagnostic::new(C::DanglingReference, &class, format!("unknown parent class {parent}"))
                    }
                    OntologyProblem::Cycle { class } => {
                        Diagnostic::new(C::TaxonomyCycle, &class, "ontology class is its own ancestor")
                    }
                    OntologyProblem::Duplicate { class } => {
                        Diagnostic::new(C::DuplicateIdentifier, &class, "ontology class declared twice")
                    }
                });
            }
            Ontology::default()
        }
    };

    let mut authored = BTreeSet::new();
    let mut seen_ids = BTreeSet::new();
    let mut note_id = |id: &Upri, diags: &mut Vec<Diagnostic>| {
        if !seen_ids.insert(id.clone()) {
            diags.push(Diagnostic::new(C::DuplicateIdentifier, id, "identifier declared more than once"));
        }
    };

    let mut classes: BTreeMap<Upri, KgbbClass> = BTreeMap::new();
    for c in &doc.classes {
        note_id(c.id(), &mut diags);
        authored.insert(c.id().clone());
        classes.insert(c.id().clone(), c.clone());
    }
    for c in &doc.classes {
        if let Some(p) = c.parent() {
            match classes.get(p) {
                None => diags.push(Diagnostic::new(C::DanglingReference, c.id(), format!("unknown parent KGBB {p}"))),
                Some(pc) if std::mem::discriminant(pc) != std::mem::discriminant(c) => {
                    diags.push(Diagnostic::new(C::ParentKindMismatch, c.id(), format!("parent {p} is a different kind of KGBB")))
                }
                Some(_) => {}
            }
        }
    }
    let order = match topo_order(&classes) {
        Ok(o) => o,
        Err(cyclic) => {
            diags.push(Diagnostic::new(C::TaxonomyCycle, &cyclic, "KGBB class is its own ancestor"));
            return Err(SpecError::Invalid(diags));
        }
    };
    if !diags.is_empty() {
        return Err(SpecError::Invalid(diags));
    }

    for id in &order {
        let class = classes[id].clone();
        let resolved = match class.parent().and_then(|p| classes.get(p)) {
            Some(parent) => inherit(parent, class, &ontology, &mut diags),
            None => class,
        };
        classes.insert(id.clone(), resolved);
    }
    for class in classes.values() {
        if let KgbbClass::Statement(s) = class {
            check_positions(s, &mut diags);
        }
    }

    let mut instances = BTreeMap::new();
    for inst in &doc.instances {
        note_id(&inst.id, &mut diags);
        authored.insert(inst.id.clone());
        if !classes.contains_key(&inst.class) {
            diags.push(Diagnostic::new(C::DanglingReference, &inst.id, format!("unknown KGBB class {}", inst.class)));
        }
        instances.insert(inst.id.clone(), inst.class.clone());
    }
    for (inst, class) in builtin_classes() {
        instances.insert(inst.id, inst.class);
        classes.insert(class.id().clone(), class);
    }

    let app = doc.application.id.clone();
    let mut associations = doc.associations.clone();
    let mut links = doc.links.clone();
    let mut references = doc.references.clone();
    let assign = |id: &mut Option<Upri>, kind: &str, i: usize| {
        if id.is_none() {
            *id = Some(Upri::new(format!("{app}#{kind}-{}", i + 1)).expect("application id is a valid UPRI"));
        }
    };
    for (i, n) in associations.iter_mut().enumerate() {
        assign(&mut n.id, "association", i);
    }
    for (i, n) in links.iter_mut().enumerate() {
        assign(&mut n.id, "link", i);
    }
    for (i, n) in references.iter_mut().enumerate() {
        assign(&mut n.id, "reference", i);
    }
    let endpoints = associations
        .iter()
        .map(|n| (n.id.as_ref().unwrap(), &n.source, &n.target))
        .chain(links.iter().map(|n| (n.id.as_ref().unwrap(), &n.source, &n.target)))
        .chain(references.iter().map(|n| (n.id.as_ref().unwrap(), &n.source, &n.target)));
    for (id, source, target) in endpoints {
        note_id(id, &mut diags);
        for end in [source, target] {
            if !instances.contains_key(end) {
                diags.push(Diagnostic::new(C::DanglingReference, id, format!("unknown KGBB instance {end}")));
            }
        }
    }
    for sp in &doc.starting_points {
        if !instances.contains_key(sp) || !authored.contains(sp) {
            diags.push(Diagnostic::new(C::UndeclaredStartingPoint, sp, "starting point is not a declared KGBB instance"));
        }
    }
    if !diags.is_empty() {
        return Err(SpecError::Invalid(diags));
    }

    let mut spec = Spec {
        application: doc.application,
        ontology,
        classes,
        instances,
        associations,
        links,
        references,
        starting_points: doc.starting_points,
        reachable: BTreeSet::new(),
        authored,
    };
    spec.reachable = reachable(&spec);
    Ok(spec)
}

fn reachable(spec: &Spec) -> BTreeSet<Upri> {
    let edges = spec.edges();
    let mut seen: BTreeSet<Upri> = spec.starting_points.iter().cloned().collect();
    let mut stack: Vec<Upri> = seen.iter().cloned().collect();
    while let Some(next) = stack.pop() {
        for e in edges.iter().filter(|e| e.source == &next) {
            if seen.insert(e.target.clone()) {
                stack.push(e.target.clone());
            }
        }
    }
    seen
}

/// Parents before children; `Err` names a class on a cycle.
fn topo_order(classes: &BTreeMap<Upri, KgbbClass>) -> Result<Vec<Upri>, Upri> {
    let mut order = Vec::new();
    let mut done = BTreeSet::new();
    for id in classes.keys() {
        let mut chain = Vec::new();
        let mut cur = Some(id.clone());
        while let Some(c) = cur {
            if done.contains(&c) {
                break;
            }
            if chain.contains(&c) {
                return Err(c);
            }
            chain.push(c.clone());
            cur = classes.get(&c).and_then(|k| k.parent().cloned());
        }
        for c in chain.into_iter().rev() {
            if done.insert(c.clone()) {
                order.push(c);
            }
        }
    }
    Ok(order)
}

fn inherit(parent: &KgbbClass, child: KgbbClass, ontology: &Ontology, diags: &mut Vec<Diagnostic>) -> KgbbClass {
    match (parent, child) {
        (KgbbClass::Statement(p), KgbbClass::Statement(mut c)) => {
            let own = std::mem::take(&mut c.positions);
            let mut positions = p.positions.clone();
            for pos in own {
                match positions.iter_mut().find(|q| q.id == pos.id) {
                    Some(inherited) => {
                        check_narrowing(&c.id, inherited, &pos, ontology, diags);
                        *inherited = pos;
                    }
                    None => positions.push(pos),
                }
            }
            c.positions = positions;
            for (variant, text) in &p.labels {
                c.labels.entry(*variant).or_insert_with(|| text.clone());
            }
            c.subject.class = narrow_class(&c.id, "subject", p.subject.class.as_ref(), c.subject.class.take(), ontology, diags);
            c.predicate = c.predicate.or_else(|| p.predicate.clone());
            c.mind_map = c.mind_map.or_else(|| p.mind_map.clone());
            c.lexical |= p.lexical;
            if c.question.is_empty() {
                c.question = p.question.clone();
            }
            if c.access_templates.is_empty() {
                c.access_templates = p.access_templates.clone();
            }
            if c.import_templates.is_empty() {
                c.import_templates = p.import_templates.clone();
            }
            KgbbClass::Statement(c)
        }
        (KgbbClass::Compound(p), KgbbClass::Compound(mut c)) => {
            match (&p.subject, c.subject.take()) {
                (Some(ps), Some(mut cs)) => {
                    cs.class = narrow_class(&c.id, "subject", ps.class.as_ref(), cs.class.take(), ontology, diags);
                    c.subject = Some(cs);
                }
                (ps, cs) => c.subject = cs.or_else(|| ps.clone()),
            }
            if c.display_templates.is_empty() {
                c.display_templates = p.display_templates.clone();
            }
            KgbbClass::Compound(c)
        }
        (_, c) => c,
    }
}

fn narrow_class(
    class: &Upri,
    what: &str,
    parent: Option<&Upri>,
    child: Option<Upri>,
    ontology: &Ontology,
    diags: &mut Vec<Diagnostic>,
) -> Option<Upri> {
    match (parent, child) {
        (Some(p), Some(c)) => {
            if !ontology.is_subclass_of(&c, p) {
                diags.push(Diagnostic::new(
                    C::ConstraintWidening,
                    class,
                    format!("{what} class {c} is not a subclass of inherited {p}"),
                ));
            }
            Some(c)
        }
        (Some(p), None) => Some(p.clone()),
        (None, c) => c,
    }
}

fn check_narrowing(
    class: &Upri,
    parent: &ObjectPositionClass,
    child: &ObjectPositionClass,
    ontology: &Ontology,
    diags: &mut Vec<Diagnostic>,
) {
    let mut widen = |detail: String| {
        diags.push(Diagnostic::new(C::ConstraintWidening, class, format!("position {}: {detail}", child.id)));
    };
    if parent.object_type != child.object_type {
        widen("changes the object type".into());
        return;
    }
    if parent.required && !child.required {
        widen("makes a required position optional".into());
    }
    let (pc, cc) = (&parent.constraint, &child.constraint);
    if let Some(p) = &pc.class {
        match &cc.class {
            Some(c) if ontology.is_subclass_of(c, p) => {}
            Some(c) => widen(format!("class {c} is not a subclass of {p}")),
            None => widen(format!("drops class constraint {p}")),
        }
    }
    if pc.datatype.is_some() && cc.datatype != pc.datatype {
        widen("changes the datatype".into());
    }
    let dt = cc.datatype.unwrap_or(crate::model::Datatype::String);
    let lit = |v: &FacetValue| Literal::new(v.0.clone(), dt).ok();
    if let Some(pmin) = pc.min.as_ref().and_then(lit) {
        match cc.min.as_ref().and_then(lit) {
            Some(cmin) if cmin.compare_value(&pmin) != Some(std::cmp::Ordering::Less) => {}
            _ => widen(format!("min widened below {}", pmin.value())),
        }
    }
    if let Some(pmax) = pc.max.as_ref().and_then(lit) {
        match cc.max.as_ref().and_then(lit) {
            Some(cmax) if cmax.compare_value(&pmax) != Some(std::cmp::Ordering::Greater) => {}
            _ => widen(format!("max widened above {}", pmax.value())),
        }
    }
    if pc.pattern.is_some() && cc.pattern != pc.pattern {
        widen("changes the pattern".into());
    }
    if !parent.logical_properties.is_subset(&child.logical_properties) {
        widen("drops logical properties".into());
    }
}

fn check_positions(class: &StatementKgbbClass, diags: &mut Vec<Diagnostic>) {
    let mut labels = BTreeSet::from([class.subject.label.as_str()]);
    let mut ids = BTreeSet::new();
    for p in &class.positions {
        if !ids.insert(&p.id) {
            diags.push(Diagnostic::new(C::DuplicateIdentifier, &class.id, format!("position {} declared twice", p.id)));
        }
        if !labels.insert(p.label.as_str()) {
            diags.push(Diagnostic::new(C::DuplicateIdentifier, &class.id, format!("thematic label {} used twice", p.label)));
        }
        let c = &p.constraint;
        match p.object_type {
            ObjectType::Resource => {
                if c.datatype.is_some() || c.min.is_some() || c.max.is_some() || c.pattern.is_some() {
                    diags.push(Diagnostic::new(C::InvalidPosition, &p.id, "resource positions take only a class constraint"));
                }
            }
            ObjectType::Literal => {
                if c.class.is_some() {
                    diags.push(Diagnostic::new(C::InvalidPosition, &p.id, "literal positions cannot have a class constraint"));
                }
                let dt = c.datatype.unwrap_or(crate::model::Datatype::String);
                for v in [&c.min, &c.max].into_iter().flatten() {
                    if Literal::new(v.0.clone(), dt).is_err() {
                        diags.push(Diagnostic::new(C::InvalidFacet, &p.id, format!("{v} is not a valid {dt}")));
                    }
                }
                if let Some(pat) = &c.pattern {
                    if regex::Regex::new(pat).is_err() {
                        diags.push(Diagnostic::new(C::InvalidFacet, &p.id, format!("invalid pattern {pat:?}")));
                    }
                }
            }
        }
    }
}
