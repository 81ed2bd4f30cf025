//! Question units: parameterized searches over statement units, stored in the graph like any unit.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::*;
use crate::spec::sentence::{capitalize_first, Sentence};
use crate::spec::{LabelVariant, ObjectType, Spec, StatementKgbbClass};
use crate::templates::{display_resource, fill, TemplateError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("{0} is not a statement KGBB")]
    UnknownKgbb(Upri),
    #[error("{kgbb} has no position {position}")]
    UnknownPosition { kgbb: Upri, position: Upri },
    #[error("binding for {slot} must be a {expected} binding")]
    BindingTypeMismatch { slot: String, expected: &'static str },
    #[error("invalid pattern {0:?}")]
    InvalidPattern(String),
    #[error("unknown question {0}")]
    UnknownQuestion(Upri),
    #[error("a compound question needs at least one operand")]
    EmptyTree,
}

/// Question parameters before they are saved as a unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuestionDraft {
    pub kgbb: Upri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<Binding>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<Upri, Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub mode: AnswerMode,
    /// For boolean questions, whether a matching unit exists; otherwise whether the list is non-empty.
    pub holds: bool,
    /// Matching statement units sorted by identifier.
    pub units: Vec<Upri>,
}

fn is_resource_binding(b: &Binding) -> bool {
    !matches!(b, Binding::Literal(_))
}

/// Checks a draft against its KGBB and decides the answer mode.
pub fn check_draft(spec: &Spec, draft: &QuestionDraft) -> Result<(BTreeMap<Upri, Binding>, AnswerMode), QueryError> {
    let class = spec.statement_class(&draft.kgbb).ok_or_else(|| QueryError::UnknownKgbb(draft.kgbb.clone()))?;
    if let Some(b) = &draft.subject {
        if !is_resource_binding(b) {
            return Err(QueryError::BindingTypeMismatch { slot: "subject".into(), expected: "resource" });
        }
    }
    for (pos, b) in &draft.bindings {
        let p = class
            .position(pos)
            .ok_or_else(|| QueryError::UnknownPosition { kgbb: draft.kgbb.clone(), position: pos.clone() })?;
        match (p.object_type, is_resource_binding(b)) {
            (ObjectType::Resource, false) => {
                return Err(QueryError::BindingTypeMismatch { slot: pos.to_string(), expected: "resource" });
            }
            (ObjectType::Literal, true) => {
                return Err(QueryError::BindingTypeMismatch { slot: pos.to_string(), expected: "literal" });
            }
            _ => {}
        }
        if let Binding::Literal(LiteralSpec { pattern: Some(re), .. }) = b {
            regex::Regex::new(re).map_err(|_| QueryError::InvalidPattern(re.clone()))?;
        }
    }
    let exact = draft.subject.as_ref().is_some_and(Binding::is_exact) && draft.bindings.values().all(Binding::is_exact);
    Ok((draft.bindings.clone(), if exact { AnswerMode::Boolean } else { AnswerMode::Retrieval }))
}

/// Builds an unsaved question unit; `meta` is filled by the caller.
pub fn build_question(spec: &Spec, draft: &QuestionDraft, meta: SemanticUnitMeta) -> Result<QuestionUnit, QueryError> {
    let (bindings, mode) = check_draft(spec, draft)?;
    Ok(QuestionUnit { meta, statement_kgbb: draft.kgbb.clone(), subject_binding: draft.subject.clone(), bindings, mode })
}

/// The class a resource belongs to for matching: its affiliation, or itself for classes.
fn class_of(store: &Store, spec: &Spec, r: &Upri) -> Option<Upri> {
    match store.resource(r) {
        Some(res) if res.kind == ResourceKind::Class => Some(res.class_affiliation.clone().unwrap_or_else(|| r.clone())),
        Some(res) => res.class_affiliation.clone(),
        None if spec.ontology.contains(r) => Some(r.clone()),
        None => None,
    }
}

fn literal_matches(spec: &LiteralSpec, l: &Literal) -> bool {
    use std::cmp::Ordering::*;
    if spec.datatype.is_some_and(|d| d != l.datatype()) {
        return false;
    }
    if let Some(e) = &spec.exact {
        if l.compare_value(e) != Some(Equal) {
            return false;
        }
    }
    if let Some(m) = &spec.min {
        if !matches!(l.compare_value(m), Some(Greater | Equal)) {
            return false;
        }
    }
    if let Some(m) = &spec.max {
        if !matches!(l.compare_value(m), Some(Less | Equal)) {
            return false;
        }
    }
    if let Some(y) = spec.year {
        if l.year() != Some(y) {
            return false;
        }
    }
    if let Some(p) = &spec.pattern {
        if !regex::Regex::new(p).is_ok_and(|re| re.is_match(l.value())) {
            return false;
        }
    }
    true
}

/// Whether a bound value satisfies a binding.
pub fn binding_matches(store: &Store, spec: &Spec, binding: &Binding, value: &ObjectInput) -> bool {
    match (binding, value) {
        (Binding::Exact(e), ObjectInput::Resource(r)) => e == r,
        (Binding::SomeInstanceOf(c) | Binding::EveryInstanceOf(c) | Binding::Class(c), ObjectInput::Resource(r)) => {
            class_of(store, spec, r).is_some_and(|k| spec.ontology.is_subclass_of(&k, c))
        }
        (Binding::Literal(ls), ObjectInput::Literal(l)) => literal_matches(ls, l),
        _ => false,
    }
}

/// Whether a statement unit answers a question. Deleted and negated statements never match.
pub fn statement_matches(store: &Store, spec: &Spec, q: &QuestionUnit, s: &StatementUnit) -> bool {
    if s.meta.is_deleted() || s.negated || s.meta.kgbb_uri != q.statement_kgbb {
        return false;
    }
    if let Some(b) = &q.subject_binding {
        if !binding_matches(store, spec, b, &ObjectInput::Resource(s.subject().clone())) {
            return false;
        }
    }
    q.bindings.iter().all(|(pos, b)| s.current(pos).is_some_and(|p| binding_matches(store, spec, b, &p.input)))
}

pub fn execute_question(store: &Store, spec: &Spec, q: &QuestionUnit) -> Answer {
    let units: Vec<Upri> = store
        .statements()
        .filter(|s| statement_matches(store, spec, q, s))
        .map(|s| s.meta.upri.clone())
        .collect();
    Answer { mode: q.mode, holds: !units.is_empty(), units }
}

/// Evaluates an AND/OR tree bottom-up as intersections and unions of matched units.
pub fn execute_compound(store: &Store, spec: &Spec, tree: &QuestionTree) -> Result<BTreeSet<Upri>, QueryError> {
    match tree {
        QuestionTree::Question(id) => {
            let q = store.unit(id).and_then(SemanticUnit::as_question).ok_or_else(|| QueryError::UnknownQuestion(id.clone()))?;
            Ok(execute_question(store, spec, q).units.into_iter().collect())
        }
        QuestionTree::And(children) => {
            let mut iter = children.iter();
            let first = iter.next().ok_or(QueryError::EmptyTree)?;
            let mut acc = execute_compound(store, spec, first)?;
            for c in iter {
                let next = execute_compound(store, spec, c)?;
                acc.retain(|u| next.contains(u));
            }
            Ok(acc)
        }
        QuestionTree::Or(children) => {
            if children.is_empty() {
                return Err(QueryError::EmptyTree);
            }
            let mut acc = BTreeSet::new();
            for c in children {
                acc.extend(execute_compound(store, spec, c)?);
            }
            Ok(acc)
        }
    }
}

/// Answers a stored question or compound question.
pub fn execute_stored(store: &Store, spec: &Spec, id: &Upri) -> Result<Answer, QueryError> {
    match store.unit(id) {
        Some(SemanticUnit::Question(q)) => Ok(execute_question(store, spec, q)),
        Some(SemanticUnit::CompoundQuestion(c)) => {
            let units: Vec<Upri> = execute_compound(store, spec, &c.tree)?.into_iter().collect();
            Ok(Answer { mode: AnswerMode::Retrieval, holds: !units.is_empty(), units })
        }
        _ => Err(QueryError::UnknownQuestion(id.clone())),
    }
}

fn binding_text(store: &Store, spec: &Spec, b: &Binding) -> String {
    let class_label = |c: &Upri| {
        let l = spec.ontology.label(c).map(str::to_string).unwrap_or_else(|| display_resource(store, spec, c));
        l.split_whitespace().map(capitalize_first).collect::<String>()
    };
    match b {
        Binding::Exact(r) => display_resource(store, spec, r),
        Binding::SomeInstanceOf(c) => format!("some{}", class_label(c)),
        Binding::EveryInstanceOf(c) => format!("every{}", class_label(c)),
        Binding::Class(c) => class_label(c),
        Binding::Literal(ls) => {
            if let Some(e) = &ls.exact {
                e.render()
            } else if let Some(y) = ls.year {
                format!("Date[year{y}]")
            } else {
                let mut parts = Vec::new();
                if let Some(m) = &ls.min {
                    parts.push(format!("min {}", m.value()));
                }
                if let Some(m) = &ls.max {
                    parts.push(format!("max {}", m.value()));
                }
                if let Some(p) = &ls.pattern {
                    parts.push(format!("matching {p}"));
                }
                let dt = ls.datatype.map(|d| d.to_string()).unwrap_or_else(|| "value".into());
                if parts.is_empty() {
                    format!("some {dt}")
                } else {
                    format!("{dt}[{}]", parts.join(", "))
                }
            }
        }
    }
}

fn question_sentence(class: &StatementKgbbClass) -> Result<Sentence, TemplateError> {
    if let Some(t) = &class.question.template {
        return Ok(Sentence::parse(t)?);
    }
    let variant = class.question.variant.unwrap_or(LabelVariant::Default);
    let template = class.label_template(variant).ok_or_else(|| TemplateError::NoLabelTemplate(class.id.clone()))?;
    let aux = class.question.auxiliary.as_deref().unwrap_or("Did");
    Ok(Sentence::parse(template)?.question(&class.subject.label, aux)?)
}

/// Interrogative label, e.g. `Did Anna travel by Train ...?`.
///
/// Unbound optional positions are elided; unbound required positions and an unbound
/// subject show their thematic label.
pub fn render_question_label(store: &Store, spec: &Spec, q: &QuestionUnit) -> Result<String, TemplateError> {
    let class = spec.statement_class(&q.statement_kgbb).ok_or_else(|| TemplateError::UnknownKgbb(q.statement_kgbb.clone()))?;
    let sentence = question_sentence(class)?;
    let mut values = BTreeMap::new();
    values.insert(
        class.subject.label.clone(),
        q.subject_binding.as_ref().map(|b| binding_text(store, spec, b)).unwrap_or_else(|| class.subject.label.clone()),
    );
    for p in &class.positions {
        match q.bindings.get(&p.id) {
            Some(b) => {
                values.insert(p.label.clone(), binding_text(store, spec, b));
            }
            None if p.required => {
                values.insert(p.label.clone(), p.label.clone());
            }
            None => {}
        }
    }
    fill(&sentence, &values, &BTreeSet::new())
}
