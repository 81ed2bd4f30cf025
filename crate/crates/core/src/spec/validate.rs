use std::collections::BTreeSet;

use super::sentence::Sentence;
use super::*;

use DiagnosticCode as C;

pub(super) fn validate(spec: &Spec) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    for n in &spec.associations {
        let id = n.id.as_ref().unwrap();
        if spec.compound_class(&n.source).is_none() {
            d.push(Diagnostic::new(C::AssociationSourceNotCompound, id, format!("source {} is not a compound KGBB", n.source)));
        }
        if !n.carry_over.is_empty() {
            let subject_class = spec.class_of_instance(&n.source).and_then(KgbbClass::subject_class);
            if subject_class.is_none() {
                d.push(Diagnostic::new(C::CarryOverInvalid, id, "carry-over needs a compound with a subject class"));
            }
            for pos in &n.carry_over {
                let ok = spec
                    .statement_class(&n.target)
                    .and_then(|c| c.position(pos))
                    .is_some_and(|p| p.object_type == ObjectType::Resource);
                if !ok {
                    d.push(Diagnostic::new(C::CarryOverInvalid, id, format!("{pos} is not a resource position of {}", n.target)));
                }
            }
        }
    }
    for n in &spec.links {
        let id = n.id.as_ref().unwrap();
        match spec.statement_class(&n.source) {
            None => d.push(Diagnostic::new(C::LinkLinkingNotStatement, id, format!("linking KGBB {} is not a statement KGBB", n.source))),
            Some(c) => {
                if !c.position(&n.use_as_subject).is_some_and(|p| p.object_type == ObjectType::Resource) {
                    d.push(Diagnostic::new(
                        C::LinkUseAsSubjectNotResourcePosition,
                        id,
                        format!("{} is not a resource position of {}", n.use_as_subject, c.id),
                    ));
                }
            }
        }
    }
    for n in &spec.references {
        if spec.statement_class(&n.target).is_none() {
            d.push(Diagnostic::new(
                C::ReferenceTargetNotStatement,
                n.id.as_ref().unwrap(),
                format!("target {} is not a statement KGBB", n.target),
            ));
        }
    }
    for e in spec.edges() {
        if e.max_count != 0 && e.min_count > e.max_count {
            d.push(Diagnostic::new(C::MinExceedsMax, e.id, format!("min_count {} exceeds max_count {}", e.min_count, e.max_count)));
        }
        if e.kind != EdgeKind::Reference {
            let functional = spec.statement_class(e.target).is_some_and(|c| c.is_functional());
            if functional && e.max_count != 1 {
                d.push(Diagnostic::new(C::FunctionalTargetMaxCount, e.id, "target has a functional predicate; max_count must be 1"));
            }
        }
    }
    for class in spec.classes.values() {
        match class {
            KgbbClass::Statement(c) => validate_statement_class(c, &mut d),
            KgbbClass::Compound(c) => {
                for t in &c.display_templates {
                    for s in &t.sections {
                        if let DisplaySection::Association { node, .. } = s {
                            if spec.association(node).is_none() {
                                d.push(Diagnostic::new(C::DanglingReference, &t.id, format!("unknown association node {node}")));
                            }
                        }
                    }
                }
            }
        }
    }
    d
}

fn validate_statement_class(c: &StatementKgbbClass, d: &mut Vec<Diagnostic>) {
    let mut names: BTreeSet<&str> = c.positions.iter().map(|p| p.label.as_str()).collect();
    names.insert(c.subject.label.as_str());
    let mut templates: Vec<(&str, &str)> = c.labels.values().map(|t| ("label", t.as_str())).collect();
    if let Some(t) = &c.question.template {
        templates.push(("question", t));
    }
    for (what, text) in templates {
        match Sentence::parse(text) {
            Err(e) => d.push(Diagnostic::new(C::InvalidTemplate, &c.id, format!("{what} template: {e}"))),
            Ok(s) => {
                for p in s.placeholders() {
                    if !names.contains(p) {
                        d.push(Diagnostic::new(C::UnknownPlaceholder, &c.id, format!("{what} template uses unknown {{{p}}}")));
                    }
                }
            }
        }
    }
    if let Some(m) = &c.mind_map {
        for pos in m.edges.keys() {
            if c.position(pos).is_none() {
                d.push(Diagnostic::new(C::UnknownTemplateSlot, &c.id, format!("mind-map edge for unknown position {pos}")));
            }
        }
    }
    let slot_ok = |s: &Slot| match s {
        Slot::Subject => true,
        Slot::Position(p) => c.position(p).is_some(),
    };
    for t in &c.access_templates {
        for (_, s) in &t.mapping {
            if !slot_ok(s) {
                d.push(Diagnostic::new(C::UnknownTemplateSlot, &t.id, format!("unknown slot {}", String::from(s.clone()))));
            }
        }
        for p in c.positions.iter().filter(|p| p.required) {
            if !t.mapping.iter().any(|(_, s)| s == &Slot::Position(p.id.clone())) {
                d.push(Diagnostic::new(C::UnmappedRequiredPosition, &t.id, format!("required position {} is not mapped", p.id)));
            }
        }
        if matches!(t.format, AccessFormat::GraphPattern | AccessFormat::Owl | AccessFormat::RdfOwl) {
            let bound: BTreeSet<&str> = t
                .mapping
                .iter()
                .map(|(v, _)| v.as_str())
                .chain(t.fresh_nodes.iter().map(|f| f.var.as_str()))
                .collect();
            for term in t.pattern.iter().flatten() {
                if term.starts_with('?') && !bound.contains(term.as_str()) {
                    d.push(Diagnostic::new(C::UnboundPatternVariable, &t.id, format!("variable {term} is neither mapped nor fresh")));
                }
            }
        }
    }
    for t in &c.import_templates {
        for s in t.columns.iter().map(|(_, s)| s).chain(t.constants.iter().map(|(s, _)| s)) {
            if !slot_ok(s) {
                d.push(Diagnostic::new(C::UnknownTemplateSlot, &t.id, format!("unknown slot {}", String::from(s.clone()))));
            }
        }
        let covered = |slot: &Slot| t.columns.iter().any(|(_, s)| s == slot) || t.constants.iter().any(|(s, _)| s == slot);
        if !covered(&Slot::Subject) {
            d.push(Diagnostic::new(C::UnmappedRequiredPosition, &t.id, "the subject is not mapped"));
        }
        for p in c.positions.iter().filter(|p| p.required) {
            if !covered(&Slot::Position(p.id.clone())) {
                d.push(Diagnostic::new(C::UnmappedRequiredPosition, &t.id, format!("required position {} is not mapped", p.id)));
            }
        }
    }
}
